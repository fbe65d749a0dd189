"""Groupoids, functors and distributors internal to a finite base.

An internal groupoid has objects ``C0``, ``C1`` of the base and structure
maps ``d, c: C1 -> C0``, ``e: C0 -> C1``, ``tau: C1 -> C1`` and
``m: C2 -> C1``, where ``C2`` is the canonical pullback of ``d`` along
``c``: its points are pairs ``(g, f)`` with ``d g == c f`` and
``m(g, f) = g∘f``.

Internal distributors follow the orientation of :mod:`relators.distributors`:
``S in Dist(A, B)`` has ``L: S0 -> A0``, ``R: S0 -> B0``, a left action
``lam`` on pairs ``(alpha, s)`` with ``d alpha == L s`` and a right action
``rho`` on pairs ``(s, beta)`` with ``R s == c beta``.
"""

from dataclasses import dataclass, field

import numpy as np

from .base import FINSET, BaseMorphism
from .distributors import Distributor
from .errors import ClaimFailed, EquationFailed, EquivalenceViolated, PreconditionViolated, SupportMismatch
from .groupoid import FinGroupoid, GpdFunctor, Verdict


def _as_morphism(base, dom, cod, values):
    if isinstance(values, BaseMorphism):
        if values.dom != dom or values.cod != cod:
            raise PreconditionViolated("structure map has the wrong domain or codomain")
        return values
    return base.morphism(dom, cod, values)


def _require(ok, equation, message, **witness):
    if not ok:
        raise EquationFailed(equation, message, **witness)


def _first_bad(lhs, rhs):
    bad = np.flatnonzero(np.asarray(lhs) != np.asarray(rhs))
    return int(bad[0]) if len(bad) else None


class InternalGroupoid:
    """Build with :func:`validate_internal_groupoid`."""

    def __init__(self, base, C0, C1, d, c, e, m, tau, C2):
        self.base = base
        self.C0, self.C1 = C0, C1
        self.d, self.c, self.e, self.m, self.tau = d, c, e, m, tau
        self.C2 = C2

    def mul(self, g, f):
        return self.m(self.C2.index(g, f))

    def mul_many(self, gs, fs):
        """``m`` on arrays of pairs already known to be composable."""
        return self.m.values[self.C2.indices(gs, fs)]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, InternalGroupoid):
            return NotImplemented
        return (
            self.C0 == other.C0
            and self.C1 == other.C1
            and all(
                getattr(self, k) == getattr(other, k) for k in ("d", "c", "e", "tau", "m")
            )
        )

    def __hash__(self):
        return hash((self.C0, self.C1))

    def __repr__(self):
        return f"InternalGroupoid({self.base.name}, C0={self.C0.n}, C1={self.C1.n})"


def validate_internal_groupoid(base, C0, C1, d, c, e, m, tau, associativity=True):
    """Check every groupoid equation pointwise on canonical pullbacks.

    ``associativity=False`` skips only the triple check; constructions whose
    ``m`` is computed componentwise from validated groupoids pass it, since
    associativity is inherited and the triple count grows cubically.

    Order: ``d∘e = c∘e = id``, the unit laws, boundaries of ``m``,
    associativity, then the inverse laws.  The first failing equation is
    raised as :class:`EquationFailed` naming a witness point.
    """
    d = _as_morphism(base, C1, C0, d)
    c = _as_morphism(base, C1, C0, c)
    e = _as_morphism(base, C0, C1, e)
    tau = _as_morphism(base, C1, C1, tau)
    C2 = base.pullback(d, c)
    m = _as_morphism(base, C2.obj, C1, m)
    dv, cv, ev, tv, mv = d.values, c.values, e.values, tau.values, m.values
    ident = np.arange(C0.n)

    x = _first_bad(dv[ev], ident)
    _require(x is None, "d_e", "d(e(x)) != x", point=x)
    x = _first_bad(cv[ev], ident)
    _require(x is None, "c_e", "c(e(x)) != x", point=x)

    n1 = C1.n

    def comp(g, f):
        # m on arrays of pairs whose composability is already established
        return mv[C2.indices(g, f)]

    arrows = np.arange(n1)
    if n1:
        x = _first_bad(comp(ev[cv], arrows), arrows)
        _require(x is None, "left_unit", "m(e(c f), f) != f", point=x)
        x = _first_bad(comp(arrows, ev[dv]), arrows)
        _require(x is None, "right_unit", "m(f, e(d f)) != f", point=x)

    pairs = C2.pairs
    if len(pairs):
        i = _first_bad(dv[mv], dv[pairs[:, 1]])
        _require(i is None, "d_m", "d(m(g, f)) != d f", point=i)
        i = _first_bad(cv[mv], cv[pairs[:, 0]])
        _require(i is None, "c_m", "c(m(g, f)) != c g", point=i)

    if len(pairs) and associativity:
        # triples (h, g, f), grouped by the middle object c g == d h
        order = np.argsort(dv, kind="stable")
        starts = np.searchsorted(dv[order], np.arange(C0.n + 1))
        gs, fs = pairs[:, 0], pairs[:, 1]
        by_mid = np.argsort(cv[gs], kind="stable")
        mid_starts = np.searchsorted(cv[gs][by_mid], np.arange(C0.n + 1))
        for y in C0.points:
            hs = order[starts[y] : starts[y + 1]]
            sel = by_mid[mid_starts[y] : mid_starts[y + 1]]
            if not len(hs) or not len(sel):
                continue
            H = hs[None, :]
            G, F, GF = gs[sel][:, None], fs[sel][:, None], mv[sel][:, None]
            lhs = comp(comp(np.broadcast_to(H, (len(sel), len(hs))), G), F)
            rhs = comp(np.broadcast_to(H, (len(sel), len(hs))), GF)
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                r, k = bad[0]
                witness = (int(hs[k]), int(gs[sel[r]]), int(fs[sel[r]]))
                _require(False, "associativity", "m(m(h, g), f) != m(h, m(g, f))", point=witness)

    x = _first_bad(dv[tv], cv)
    _require(x is None, "d_tau", "d(tau f) != c f", point=x)
    x = _first_bad(cv[tv], dv)
    _require(x is None, "c_tau", "c(tau f) != d f", point=x)
    if n1:
        x = _first_bad(comp(tv, arrows), ev[dv])
        _require(x is None, "left_inverse", "m(tau f, f) != e(d f)", point=x)
        x = _first_bad(comp(arrows, tv), ev[cv])
        _require(x is None, "right_inverse", "m(f, tau f) != e(c f)", point=x)
    return InternalGroupoid(base, C0, C1, d, c, e, m, tau, C2)


class InternalFunctor:
    def __init__(self, source, target, F0, F1):
        self.source, self.target = source, target
        self.F0, self.F1 = F0, F1

    def then(self, other):
        base = self.source.base
        return InternalFunctor(
            self.source, other.target, base.compose(other.F0, self.F0), base.compose(other.F1, self.F1)
        )

    def __repr__(self):
        return f"InternalFunctor({self.source!r} -> {self.target!r})"


def validate_internal_functor(C, D, F0, F1):
    base = C.base
    F0 = _as_morphism(base, C.C0, D.C0, F0)
    F1 = _as_morphism(base, C.C1, D.C1, F1)
    f0, f1 = F0.values, F1.values
    x = _first_bad(D.d.values[f1], f0[C.d.values])
    _require(x is None, "d_preserved", "d(F1 f) != F0(d f)", point=x)
    x = _first_bad(D.c.values[f1], f0[C.c.values])
    _require(x is None, "c_preserved", "c(F1 f) != F0(c f)", point=x)
    x = _first_bad(f1[C.e.values], D.e.values[f0])
    _require(x is None, "e_preserved", "F1(e x) != e(F0 x)", point=x)
    gs, fs = C.C2.pairs[:, 0], C.C2.pairs[:, 1]
    i = _first_bad(f1[C.m.values], D.mul_many(f1[gs], f1[fs]))
    _require(i is None, "m_preserved", "F1(m(g, f)) != m(F1 g, F1 f)", point=None if i is None else (int(gs[i]), int(fs[i])))
    x = _first_bad(f1[C.tau.values], D.tau.values[f1])
    _require(x is None, "tau_preserved", "F1(tau f) != tau(F1 f)", point=x)
    return InternalFunctor(C, D, F0, F1)


class InternalDistributor:
    """Build with :func:`validate_internal_distributor`.

    ``lam_dom`` is the pullback of ``A.d`` and ``L`` (pairs ``(alpha, s)``),
    ``rho_dom`` the pullback of ``R`` and ``B.c`` (pairs ``(s, beta)``).
    """

    def __init__(self, A, B, S0, L, R, lam, rho, lam_dom, rho_dom):
        self.A, self.B = A, B
        self.S0, self.L, self.R = S0, L, R
        self.lam, self.rho = lam, rho
        self.lam_dom, self.rho_dom = lam_dom, rho_dom

    @property
    def base(self):
        return self.A.base

    def act_left(self, alpha, s):
        return self.lam(self.lam_dom.index(alpha, s))

    def act_right(self, s, beta):
        return self.rho(self.rho_dom.index(s, beta))

    def __repr__(self):
        return f"InternalDistributor({self.S0.n} points)"


def validate_internal_distributor(A, B, S0, L, R, lam, rho):
    """Check boundaries, compatibility, then the unit and associativity laws of each action."""
    base = A.base
    L = _as_morphism(base, S0, A.C0, L)
    R = _as_morphism(base, S0, B.C0, R)
    lam_dom = base.pullback(A.d, L)
    rho_dom = base.pullback(R, B.c)
    lam = _as_morphism(base, lam_dom.obj, S0, lam)
    rho = _as_morphism(base, rho_dom.obj, S0, rho)
    lv, rv, Lv, Rv = lam.values, rho.values, L.values, R.values
    if len(lam_dom.pairs):
        alphas, ss = lam_dom.pairs[:, 0], lam_dom.pairs[:, 1]
        i = _first_bad(Lv[lv], A.c.values[alphas])
        _require(i is None, "L_lambda", "L(alpha·s) != c alpha", point=i)
        i = _first_bad(Rv[lv], Rv[ss])
        _require(i is None, "R_lambda", "R(alpha·s) != R s", point=i)
    if len(rho_dom.pairs):
        ss, betas = rho_dom.pairs[:, 0], rho_dom.pairs[:, 1]
        i = _first_bad(Lv[rv], Lv[ss])
        _require(i is None, "L_rho", "L(s·beta) != L s", point=i)
        i = _first_bad(Rv[rv], B.d.values[betas])
        _require(i is None, "R_rho", "R(s·beta) != d beta", point=i)

    S = InternalDistributor(A, B, S0, L, R, lam, rho, lam_dom, rho_dom)
    in_b = [[] for _ in B.C0.points]
    for beta in B.C1.points:
        in_b[B.c(beta)].append(beta)
    out_a = [[] for _ in A.C0.points]
    for alpha in A.C1.points:
        out_a[A.d(alpha)].append(alpha)

    for s in S0.points:
        for alpha in out_a[Lv[s]]:
            for beta in in_b[Rv[s]]:
                ok = S.act_right(S.act_left(alpha, s), beta) == S.act_left(alpha, S.act_right(s, beta))
                _require(ok, "compatibility", "(alpha·s)·beta != alpha·(s·beta)", point=(alpha, s, beta))
    for s in S0.points:
        _require(S.act_left(A.e(Lv[s]), s) == s, "lambda_unit", "e(L s)·s != s", point=s)
        for alpha in out_a[Lv[s]]:
            for alpha2 in out_a[A.c(alpha)]:
                ok = S.act_left(A.mul(alpha2, alpha), s) == S.act_left(alpha2, S.act_left(alpha, s))
                _require(ok, "lambda_associativity", "(alpha2∘alpha)·s != alpha2·(alpha·s)", point=(alpha2, alpha, s))
    for s in S0.points:
        _require(S.act_right(s, B.e(Rv[s])) == s, "rho_unit", "s·e(R s) != s", point=s)
        for beta in in_b[Rv[s]]:
            for beta2 in in_b[B.d(beta)]:
                ok = S.act_right(s, B.mul(beta, beta2)) == S.act_right(S.act_right(s, beta), beta2)
                _require(ok, "rho_associativity", "s·(beta∘beta2) != (s·beta)·beta2", point=(s, beta, beta2))
    return S


# --------------------------------------------------- external translation


def internalize(G, base=FINSET):
    """A finite groupoid as an internal groupoid with trivial actions."""
    C0, C1 = base.object(G.n_objects), base.object(G.n_arrows)
    d, c = base.morphism(C1, C0, G.dom), base.morphism(C1, C0, G.cod)
    C2 = base.pullback(d, c)
    m = [G.mul(int(g), int(f)) for g, f in C2.pairs]
    return validate_internal_groupoid(base, C0, C1, d, c, G.identity, m, G.inverse)


def externalize(C):
    """The underlying finite groupoid (the actions are forgotten)."""
    compose = {(int(g), int(f)): int(v) for (g, f), v in zip(C.C2.pairs, C.m.values)}
    return FinGroupoid(
        C.C0.n,
        C.d.values.tolist(),
        C.c.values.tolist(),
        C.e.values.tolist(),
        C.tau.values.tolist(),
        compose,
    )


def internalize_functor(F, base=FINSET, source=None, target=None):
    C = source if source is not None else internalize(F.source, base)
    D = target if target is not None else internalize(F.target, base)
    return validate_internal_functor(C, D, F.obj_map, F.arr_map)


def externalize_functor(F, source=None, target=None):
    C = source if source is not None else externalize(F.source)
    D = target if target is not None else externalize(F.target)
    return GpdFunctor(C, D, F.F0.values.tolist(), F.F1.values.tolist())


def internalize_distributor(S, base=FINSET, A=None, B=None):
    A = A if A is not None else internalize(S.source, base)
    B = B if B is not None else internalize(S.target, base)
    S0 = base.object(S.n_elements)
    L = base.morphism(S0, A.C0, [a for _, a in S.anchor])
    R = base.morphism(S0, B.C0, [b for b, _ in S.anchor])
    lam_dom = base.pullback(A.d, L)
    rho_dom = base.pullback(R, B.c)
    lam = [S.left[int(alpha), int(s)] for alpha, s in lam_dom.pairs]
    rho = [S.right[int(s), int(beta)] for s, beta in rho_dom.pairs]
    return validate_internal_distributor(A, B, S0, L, R, lam, rho)


def externalize_distributor(S, source=None, target=None):
    """The underlying distributor; elements keep their order within each fiber.

    ``labels[x]`` is the point of ``S0`` that became element ``x``.
    """
    A = source if source is not None else externalize(S.A)
    B = target if target is not None else externalize(S.B)
    order = sorted(S.S0.points, key=lambda s: (S.R(s), S.L(s), s))
    index = {s: i for i, s in enumerate(order)}
    sizes = {}
    for s in order:
        sizes[S.R(s), S.L(s)] = sizes.get((S.R(s), S.L(s)), 0) + 1
    left = {(int(alpha), index[int(s)]): index[int(v)] for (alpha, s), v in zip(S.lam_dom.pairs, S.lam.values)}
    right = {(index[int(s)], int(beta)): index[int(v)] for (s, beta), v in zip(S.rho_dom.pairs, S.rho.values)}
    return Distributor(A, B, sizes, left, right, labels=order)


# ------------------------------------------------------- finite limits


def internal_terminal(base):
    one = base.terminal()
    return validate_internal_groupoid(base, one, one, [0], [0], [0], [0], [0])


def internal_pullback(F, G):
    """Levelwise pullback of ``F: X -> Z`` and ``G: Y -> Z``; returns ``(P, p1, p2)``."""
    X, Y = F.source, G.source
    base = X.base
    P0 = base.pullback(F.F0, G.F0)
    P1 = base.pullback(F.F1, G.F1)
    d = P0.mediate(base.compose(X.d, P1.p1), base.compose(Y.d, P1.p2))
    c = P0.mediate(base.compose(X.c, P1.p1), base.compose(Y.c, P1.p2))
    e = P1.mediate(base.compose(X.e, P0.p1), base.compose(Y.e, P0.p2))
    tau = P1.mediate(base.compose(X.tau, P1.p1), base.compose(Y.tau, P1.p2))
    C2 = base.pullback(d, c)
    pairs = P1.pairs
    gs, fs = C2.pairs[:, 0], C2.pairs[:, 1]
    m = P1.indices(X.mul_many(pairs[gs, 0], pairs[fs, 0]), Y.mul_many(pairs[gs, 1], pairs[fs, 1]))
    # composites are componentwise in validated groupoids, so associativity is inherited
    P = validate_internal_groupoid(base, P0.obj, P1.obj, d, c, e, m, tau, associativity=False)
    P.levels = (P0, P1)
    p1 = InternalFunctor(P, X, P0.p1, P1.p1)
    p2 = InternalFunctor(P, Y, P0.p2, P1.p2)
    return P, p1, p2


def internal_product(A, C):
    one = internal_terminal(A.base)
    base = A.base
    to_one = lambda G: InternalFunctor(G, one, base.to_terminal(G.C0), base.to_terminal(G.C1))
    return internal_pullback(to_one(A), to_one(C))


def internal_pairing(F, G, product):
    """``<F, G>`` into a product built by :func:`internal_product`."""
    P0, P1 = product.levels
    return InternalFunctor(F.source, product, P0.mediate(F.F0, G.F0), P1.mediate(F.F1, G.F1))


# --------------------------------------------------- components, support


def internal_pi0(C):
    """``Π0(C)`` as the coequalizer of ``d`` and ``c``; returns the :class:`Coequalizer`."""
    return C.base.coequalizer(C.d, C.c)


def pi0_map(F, source_pi0=None, target_pi0=None):
    """``Π0(F)``, induced on the coequalizers."""
    base = F.source.base
    qc = source_pi0 if source_pi0 is not None else internal_pi0(F.source)
    qd = target_pi0 if target_pi0 is not None else internal_pi0(F.target)
    return qc.descend(base.compose(qd.q, F.F0))


@dataclass(frozen=True)
class Support:
    """The image of ``<d, c>`` with its comparison and mono, plus the kernel pair it equals."""

    obj: object
    comparison: BaseMorphism
    mono: BaseMorphism
    product: object
    kernel_pair: object


def support(C):
    base = C.base
    prod = base.product(C.C0, C.C0)
    dc = prod.mediate(C.d, C.c)
    I, comparison, mono = base.image_factorization(dc)
    kp = base.kernel_pair(internal_pi0(C).q)
    image_pairs = {tuple(int(v) for v in prod.pairs[i]) for i in mono.values}
    kernel_pairs = {tuple(int(v) for v in p) for p in kp.pairs}
    if image_pairs != kernel_pairs:
        extra = sorted(kernel_pairs ^ image_pairs)[0]
        raise SupportMismatch("support differs from the kernel pair of the Π0 quotient", pair=extra)
    return Support(I, comparison, mono, prod, kp)


# ------------------------------------------------ discrete fibrations, finality


def is_internal_dfib(F):
    """Is the square ``c∘F1 = F0∘c`` a pullback?"""
    base = F.source.base
    pb = base.pullback(F.target.c, F.F0)
    comparison = pb.mediate(F.F1, F.source.c)
    if base.is_iso(comparison):
        return Verdict(True)
    counts = np.bincount(comparison.values, minlength=pb.obj.n)
    bad = int(np.flatnonzero(counts != 1)[0])
    delta, x = (int(v) for v in pb.pairs[bad])
    return Verdict(False, {"arrow": delta, "object": x, "lifts": int(counts[bad])})


def _joint_comparison(F, M, legs, h_m, h_legs):
    """Compare into ``{(w, x1, ..., xk) | F0 xi == legs[i](w)}`` built by nested pullbacks.

    ``h_m: V -> M`` and ``h_legs[i]: V -> C0`` give the comparison from ``V``.
    Returns ``(W, comparison)``.
    """
    base = F.source.base
    W, to_m, h = None, base.identity(M), h_m
    for leg, hx in zip(legs, h_legs):
        pb = base.pullback(base.compose(leg, to_m), F.F0)
        h = pb.mediate(h, hx)
        to_m = base.compose(to_m, pb.p1)
        W = pb.obj
    return W, h


def full_comparison(F, variant="i"):
    """The comparison for one of the three joint pullbacks along ``F0``.

    ``i``: ``f ↦ (F1 f, d f, c f)`` into ``{(delta, x, y) | d delta = F0 x, c delta = F0 y}``.
    ``ii``: pairs with a common domain, ``(f, f') ↦ ((F1 f, F1 f'), d f, c f, c f')``.
    ``iii``: pairs with a common codomain, ``(f, f') ↦ ((F1 f, F1 f'), c f, d f, d f')``.
    """
    C, D = F.source, F.target
    base = C.base
    comp = base.compose
    if variant == "i":
        return _joint_comparison(F, D.C1, [D.d, D.c], F.F1, [C.d, C.c])
    first, second = (C.d, C.c) if variant == "ii" else (C.c, C.d)
    dfirst, dsecond = (D.d, D.c) if variant == "ii" else (D.c, D.d)
    src = base.pullback(first, first)
    M = base.pullback(dfirst, dfirst)
    h_m = M.mediate(comp(F.F1, src.p1), comp(F.F1, src.p2))
    legs = [comp(dfirst, M.p1), comp(dsecond, M.p1), comp(dsecond, M.p2)]
    h_legs = [comp(first, src.p1), comp(second, src.p1), comp(second, src.p2)]
    return _joint_comparison(F, M.obj, legs, h_m, h_legs)


def is_internal_final(F):
    """Internally full (variant ``i`` comparison surjective) and ``Π0(F)`` invertible."""
    base = F.source.base
    _, comparison = full_comparison(F, "i")
    full = base.is_regular_epi(comparison)
    pi0_iso = base.is_iso(pi0_map(F))
    return Verdict(full and pi0_iso, {"full": full, "pi0_iso": pi0_iso})


def alan_cc_check(F):
    """Regular-epi verdicts of the three joint-pullback comparisons; they must agree."""
    base = F.source.base
    verdicts = tuple(base.is_regular_epi(full_comparison(F, v)[1]) for v in ("i", "ii", "iii"))
    if len(set(verdicts)) != 1:
        raise EquivalenceViolated("joint-pullback comparisons disagree", verdicts=verdicts)
    return verdicts


# ------------------------------------------------- distributors as groupoids


@dataclass(frozen=True)
class ElementsGroupoid:
    """``A <-L- 𝕊 -R-> B`` for an internal distributor.

    ``S1`` is the pullback of ``lam`` and ``rho``: a point is a pair
    ``((alpha, s1), (s2, beta))`` with ``alpha·s1 == s2·beta``, an arrow
    ``s1 -> s2``.
    """

    groupoid: InternalGroupoid
    L: InternalFunctor
    R: InternalFunctor
    S1: object


def distributor_to_internal_groupoid(S):
    A, B, base = S.A, S.B, S.base
    comp = base.compose
    S1 = base.pullback(S.lam, S.rho)
    d = comp(S.lam_dom.p2, S1.p1)
    c = comp(S.rho_dom.p1, S1.p2)
    alpha_of = comp(S.lam_dom.p1, S1.p1)
    beta_of = comp(S.rho_dom.p2, S1.p2)
    e = S1.mediate(
        S.lam_dom.mediate(comp(A.e, S.L), base.identity(S.S0)),
        S.rho_dom.mediate(base.identity(S.S0), comp(B.e, S.R)),
    )
    tau = S1.mediate(
        S.lam_dom.mediate(comp(A.tau, alpha_of), c),
        S.rho_dom.mediate(d, comp(B.tau, beta_of)),
    )
    C2 = base.pullback(d, c)
    av, bv, dv, cv = alpha_of.values, beta_of.values, d.values, c.values
    gs, fs = C2.pairs[:, 0], C2.pairs[:, 1]
    alphas = A.mul_many(av[gs], av[fs])
    betas = B.mul_many(bv[gs], bv[fs])
    m = S1.indices(S.lam_dom.indices(alphas, dv[fs]), S.rho_dom.indices(cv[gs], betas))
    # an arrow is determined by its endpoints and (alpha, beta); associativity comes from A and B
    E = validate_internal_groupoid(base, S.S0, S1.obj, d, c, e, m, tau, associativity=False)
    L = validate_internal_functor(E, A, S.L, alpha_of)
    R = validate_internal_functor(E, B, S.R, beta_of)
    return ElementsGroupoid(E, L, R, S1)


def internal_hom_distributor(A):
    """``Hom_A``: ``S0 = A1`` with ``L = c``, ``R = d`` and both actions by ``m``."""
    # both action domains are the canonical pullback of d and c, i.e. C2
    return validate_internal_distributor(A, A, A.C1, A.c, A.d, A.m.values, A.m.values)


# ---------------------------------------------------------- composition


@dataclass(frozen=True)
class InternalTensor:
    """``T⊗S`` with the data of its construction.

    ``diamond0`` is ``S0 ×_B0 T0`` (pairs ``(s, t)``), ``moves`` the object
    ``S0 ×_B0 B1 ×_B0 T0`` of pairs ``(j, t)`` with ``j = (s, beta)`` a point of
    ``S.rho_dom``, and ``coequalizer`` the quotient ``Q0``.
    """

    distributor: InternalDistributor
    diamond0: object
    moves: object
    coequalizer: object
    move_source: BaseMorphism
    move_target: BaseMorphism

    @property
    def Q0(self):
        return self.coequalizer.q


def compose_internal_distributors(S, T):
    """Coequalize ``(s, beta, t) ↦ (s·beta, t)`` and ``(s, beta, t) ↦ (s, beta·t)``."""
    if S.B != T.A:
        raise PreconditionViolated("distributors do not share the middle internal groupoid")
    A, B, C, base = S.A, S.B, T.B, S.base
    comp = base.compose
    D0 = base.pullback(S.R, T.L)
    V = base.pullback(comp(B.d, S.rho_dom.p2), T.L)
    s_of, beta_of = comp(S.rho_dom.p1, V.p1), comp(S.rho_dom.p2, V.p1)
    rho_x_id = D0.mediate(comp(S.rho, V.p1), V.p2)
    id_x_lam = D0.mediate(s_of, comp(T.lam, T.lam_dom.mediate(beta_of, V.p2)))
    coeq = base.coequalizer(rho_x_id, id_x_lam)
    Z, q = coeq.obj, coeq.q
    L = coeq.descend(comp(S.L, D0.p1))
    R = coeq.descend(comp(T.R, D0.p2))

    # actions: computed on every representative pair and descended along a surjection
    lam_dom = base.pullback(A.d, L)
    lam_up = base.pullback(A.d, comp(S.L, D0.p1))
    to_lam = lam_dom.mediate(lam_up.p1, comp(q, lam_up.p2))
    lam_s = comp(S.lam, S.lam_dom.mediate(lam_up.p1, comp(D0.p1, lam_up.p2)))
    lam_h = comp(q, D0.mediate(lam_s, comp(D0.p2, lam_up.p2)))
    lam = base.factor_through_epi(to_lam, lam_h, "left_action_well_defined")

    rho_dom = base.pullback(R, C.c)
    rho_up = base.pullback(comp(T.R, D0.p2), C.c)
    to_rho = rho_dom.mediate(comp(q, rho_up.p1), rho_up.p2)
    rho_t = comp(T.rho, T.rho_dom.mediate(comp(D0.p2, rho_up.p1), rho_up.p2))
    rho_h = comp(q, D0.mediate(comp(D0.p1, rho_up.p1), rho_t))
    rho = base.factor_through_epi(to_rho, rho_h, "right_action_well_defined")

    TS = validate_internal_distributor(A, C, Z, L, R, lam, rho)
    return InternalTensor(TS, D0, V, coeq, rho_x_id, id_x_lam)


@dataclass(frozen=True)
class InternalSpan:
    apex: InternalGroupoid
    left: InternalFunctor
    right: InternalFunctor


def internal_span_compose(sp1, sp2):
    """Levelwise pullback ``(T⋄S)_i = S_i ×_{B_i} T_i``."""
    if sp1.right.target != sp2.left.target:
        raise PreconditionViolated("spans do not share the middle internal groupoid")
    P, p1, p2 = internal_pullback(sp1.right, sp2.left)
    return InternalSpan(P, p1.then(sp1.left), p2.then(sp2.right))


def elements_span_internal(S):
    E = distributor_to_internal_groupoid(S)
    return InternalSpan(E.groupoid, E.L, E.R)


def h_groupoid(tensor, S, T):
    """Objects ``S0 ×_B0 T0``; an arrow ``(s', beta, t)`` goes ``(s'·beta, t) -> (s', beta·t)``."""
    base, B = S.base, S.B
    V, D0 = tensor.moves, tensor.diamond0
    d, c = tensor.move_source, tensor.move_target
    comp = base.compose
    e = V.mediate(S.rho_dom.mediate(D0.p1, comp(B.e, comp(S.R, D0.p1))), D0.p2)
    s_of = comp(S.rho_dom.p1, V.p1)
    beta_of = comp(S.rho_dom.p2, V.p1)
    t_of = V.p2
    # tau(s', beta, t) = (s'·beta, tau beta, beta·t)
    tau = V.mediate(
        S.rho_dom.mediate(comp(D0.p1, d), comp(B.tau, beta_of)),
        comp(D0.p2, c),
    )
    C2 = base.pullback(d, c)
    sv, bv, tv = s_of.values, beta_of.values, t_of.values
    gs, fs = C2.pairs[:, 0], C2.pairs[:, 1]
    m = V.indices(S.rho_dom.indices(sv[gs], B.mul_many(bv[gs], bv[fs])), tv[fs])
    return validate_internal_groupoid(base, D0.obj, V.obj, d, c, e, m, tau, associativity=False)


@dataclass(frozen=True)
class ElementsFibration:
    """``E1 = Z ×_{A0×C0} (A1×C1)``: a point ``(z, (alpha, gamma))`` is the
    arrow ``alpha⁻¹·z·gamma -> z``; ``projection`` is the functor to ``A × C``."""

    groupoid: InternalGroupoid
    projection: InternalFunctor
    E1: object


def elements_fibration(D, product):
    """The discrete fibration into ``A × C`` of an internal distributor in ``Dist(A, C)``."""
    base = D.base
    comp = base.compose
    A, C = D.A, D.B
    P0, P1 = product.levels
    LR = P0.mediate(D.L, D.R)
    E1 = base.pullback(LR, product.c)
    alpha_of = comp(P1.p1, E1.p2)
    gamma_of = comp(P1.p2, E1.p2)
    # d(z, (alpha, gamma)) = alpha⁻¹·(z·gamma)
    zg = comp(D.rho, D.rho_dom.mediate(E1.p1, gamma_of))
    d = comp(D.lam, D.lam_dom.mediate(comp(A.tau, alpha_of), zg))
    c = E1.p1
    e = E1.mediate(base.identity(D.S0), comp(product.e, LR))
    tau = E1.mediate(d, comp(product.tau, E1.p2))
    C2 = base.pullback(d, c)
    pv, zv = E1.p2.values, E1.p1.values
    gs, fs = C2.pairs[:, 0], C2.pairs[:, 1]
    m = E1.indices(zv[gs], product.mul_many(pv[gs], pv[fs]))
    E = validate_internal_groupoid(base, D.S0, E1.obj, d, c, e, m, tau, associativity=False)
    proj = validate_internal_functor(E, product, LR, E1.p2)
    return ElementsFibration(E, proj, E1)


@dataclass
class LastLemmaReport:
    """Everything built while checking that ``T⋄S -> T⊗S -> A×C`` is the comprehensive factorization."""

    claim1: bool
    claim2: bool
    second_factor_dfib: bool
    sizes: dict
    K: BaseMorphism = field(repr=False)
    pi0_comparison: BaseMorphism = field(repr=False)
    W: object = field(repr=False)
    eq_q0: object = field(repr=False)
    h_groupoid: InternalGroupoid = field(repr=False)
    tensor: InternalTensor = field(repr=False)

    @property
    def ok(self):
        return self.claim1 and self.claim2 and self.second_factor_dfib

    def to_json(self):
        return {
            "claim1_regular_epi": self.claim1,
            "claim2_pi0_iso": self.claim2,
            "second_factor_dfib": self.second_factor_dfib,
            "sizes": dict(self.sizes),
        }


def verify_last_lemma(S, T, strict=True):
    """Check that ``T⋄S -> T⊗S -> A×C`` is the comprehensive factorization of ``<L, R>``.

    Three verdicts: ``K`` below is a regular epimorphism (``claim1``),
    ``Π0(Q0, Q1)`` is an isomorphism (``claim2``), and the second factor is
    an internal discrete fibration.

    ``Q0: (T⋄S)0 -> (T⊗S)0`` is the coequalizer map and ``Q1`` the map into
    ``E1`` determined by codomains: ``Q1 f = (Q0(c f), (alpha, gamma))``.
    ``K f = ((c f, y f), Q1 f)`` lands in ``W = {(x, y, phi) | Q0 x = c phi = Q0 y}``
    where, for ``f`` built from ``alpha: s_d -> s_c`` and ``gamma: t_d -> t_c``,
    ``y f = (alpha·s_d, t_d·gamma⁻¹)`` is ``c f`` moved once inside its class.
    """
    A, B, C = S.A, S.B, T.B
    base = S.base
    comp = base.compose
    tensor = compose_internal_distributors(S, T)
    TS = tensor.distributor
    q0 = tensor.Q0

    ES, ET = distributor_to_internal_groupoid(S), distributor_to_internal_groupoid(T)
    diamond = internal_span_compose(InternalSpan(ES.groupoid, ES.L, ES.R), InternalSpan(ET.groupoid, ET.L, ET.R))
    Dg = diamond.apex
    P0, P1 = Dg.levels
    if P0.obj != tensor.diamond0.obj or not np.array_equal(P0.pairs, tensor.diamond0.pairs):
        raise ClaimFailed("objects of T⋄S differ from the coequalized object", claim=0)

    AC, _, _ = internal_product(A, C)
    fib = elements_fibration(TS, AC)
    span_map = internal_pairing(diamond.left, diamond.right, AC)
    Q1 = fib.E1.mediate(comp(q0, Dg.c), span_map.F1)
    Q = validate_internal_functor(Dg, fib.groupoid, q0, Q1)
    composite = Q.then(fib.projection)
    if composite.F0 != span_map.F0 or composite.F1 != span_map.F1:
        raise ClaimFailed("factorization does not recover <L, R>", claim=0)

    # y(f) = (alpha·s_d, t_d·gamma⁻¹)
    fS, fT = P1.p1, P1.p2
    alpha = comp(ES.L.F1, fS)
    s_d = comp(ES.groupoid.d, fS)
    gamma = comp(ET.R.F1, fT)
    t_d = comp(ET.groupoid.d, fT)
    y_s = comp(S.lam, S.lam_dom.mediate(alpha, s_d))
    y_t = comp(T.rho, T.rho_dom.mediate(t_d, comp(C.tau, gamma)))
    y = P0.mediate(y_s, y_t)
    DD = base.product(P0.obj, P0.obj)
    ZZ = base.product(TS.S0, TS.S0)
    q0q0 = ZZ.mediate(comp(q0, DD.p1), comp(q0, DD.p2))
    cc = ZZ.mediate(fib.groupoid.c, fib.groupoid.c)
    W = base.pullback(q0q0, cc)
    K = W.mediate(DD.mediate(Dg.c, y), Q1)
    claim1 = base.is_regular_epi(K)

    pi0_d, pi0_e = internal_pi0(Dg), internal_pi0(fib.groupoid)
    pi0_q = pi0_map(Q, pi0_d, pi0_e)
    claim2 = base.is_iso(pi0_q)
    dfib = bool(is_internal_dfib(fib.projection))

    H = h_groupoid(tensor, S, T)
    pi0_h = internal_pi0(H)
    if pi0_h.obj != TS.S0 or pi0_h.q != q0:
        raise ClaimFailed("Π0 of the H groupoid differs from (T⊗S)0", claim=1)
    eq_q0 = support(H)

    report = LastLemmaReport(
        claim1,
        claim2,
        dfib,
        {
            "diamond0": P0.obj.n,
            "diamond1": P1.obj.n,
            "tensor0": TS.S0.n,
            "W": W.obj.n,
            "pi0_diamond": pi0_d.obj.n,
            "pi0_tensor": pi0_e.obj.n,
        },
        K,
        pi0_q,
        W,
        eq_q0,
        H,
        tensor,
    )
    if strict:
        if not claim1:
            missing = int(np.setdiff1d(np.arange(W.obj.n), K.values)[0])
            raise ClaimFailed("K is not a regular epimorphism", claim=1, point=missing)
        if not claim2:
            raise ClaimFailed("Π0(Q0, Q1) is not an isomorphism", claim=2)
        if not dfib:
            raise ClaimFailed("second factor is not an internal discrete fibration", claim=3)
    return report
