"""Distributors between finite groupoids and discrete two-sided fibrations.

Orientation conventions, used everywhere in the package:

* ``S`` in ``Dist(A, B)`` is a functor ``B^op × A -> Set``; ``source`` is
  ``A`` and ``target`` is ``B``.  An element ``s`` of the fiber ``S(b, a)``
  can be pictured as a dashed arrow ``b ⇢ a``.
* ``A`` acts on the left: ``alpha: a -> a'`` sends ``s`` in ``S(b, a)`` to
  ``alpha·s`` in ``S(b, a')``.
* ``B`` acts on the right: ``beta: b' -> b`` sends ``s`` to ``s·beta`` in
  ``S(b', a)``.
* For ``S`` in ``Dist(A, B)`` and ``T`` in ``Dist(B, C)`` the composite is
  ``T⊗S`` in ``Dist(A, C)``, with fibers built from pairs ``(t, s)``,
  ``t`` in ``T(c, b)`` and ``s`` in ``S(b, a)``.

Elements of a distributor are numbered globally in the order
``(b, a, local index)``.
"""

from functools import cached_property

from .errors import (
    ActionsIncompatible,
    IndexOutOfRange,
    LeftActionNotFunctorial,
    MalformedAction,
    NotTwoSided,
    PreconditionViolated,
    RightActionNotFunctorial,
)
from .factorization import is_discrete_fibration, is_discrete_opfibration
from .groupoid import FinGroupoid, GpdFunctor, Verdict, pairing


class Distributor:
    """A finite distributor ``S in Dist(A, B)``; build with :func:`validate_distributor`.

    ``sizes[(b, a)]`` is ``|S(b, a)|``.  ``left[alpha, s]`` and
    ``right[s, beta]`` hold the actions on global element indices.
    ``labels`` optionally names each element (used for provenance).
    """

    def __init__(self, source, target, sizes, left, right, labels=None):
        self.source = source
        self.target = target
        anchor, fibers = [], {}
        for b in target.objects:
            for a in source.objects:
                n = sizes.get((b, a), 0)
                if n:
                    fibers[b, a] = range(len(anchor), len(anchor) + n)
                    anchor.extend([(b, a)] * n)
        self.anchor = tuple(anchor)
        self.fibers = fibers
        self.left = left
        self.right = right
        self.labels = tuple(labels) if labels is not None else tuple(range(len(anchor)))

    @property
    def n_elements(self):
        return len(self.anchor)

    @property
    def elements(self):
        return range(len(self.anchor))

    def fiber(self, b, a):
        return self.fibers.get((b, a), range(0))

    def sizes(self):
        return {k: len(v) for k, v in self.fibers.items()}

    def act_left(self, alpha, s):
        return self.left[alpha, s]

    def act_right(self, s, beta):
        return self.right[s, beta]

    def local_index(self, s):
        return s - self.fibers[self.anchor[s]].start

    def __eq__(self, other):
        if not isinstance(other, Distributor):
            return NotImplemented
        return (
            self.anchor == other.anchor
            and self.left == other.left
            and self.right == other.right
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self):
        return hash(self.anchor)

    def __repr__(self):
        return f"Distributor({self.n_elements} elements, {len(self.fibers)} non-empty fibers)"


def _action_table(raw, key_len=2):
    if hasattr(raw, "items"):
        return {tuple(int(v) for v in k): int(r) for k, r in raw.items()}
    table = {}
    for entry in raw:
        *key, r = (int(v) for v in entry)
        key = tuple(key)
        if key in table:
            raise MalformedAction(f"action entry {key} given twice", entry=key)
        table[key] = r
    return table


def validate_distributor(source, target, sizes, left, right, labels=None):
    """Check the action laws exhaustively and return a :class:`Distributor`.

    ``left``/``right`` are mappings or ``[alpha, s, result]`` /
    ``[s, beta, result]`` triples on global element indices.  Compatibility
    is checked first, then each action's unit and composition laws.
    """
    A, B = source, target
    sizes = {(int(b), int(a)): int(n) for (b, a), n in sizes.items() if int(n)}
    for b, a in sizes:
        if not (0 <= b < B.n_objects and 0 <= a < A.n_objects):
            raise IndexOutOfRange(f"fiber ({b},{a}) out of range", fiber=(b, a))
    S = Distributor(A, B, sizes, _action_table(left), _action_table(right), labels)
    L, R = S.left, S.right
    for s, (b, a) in enumerate(S.anchor):
        for alpha in A.out_arrows[a]:
            r = L.get((alpha, s))
            if r is None or not 0 <= r < S.n_elements or S.anchor[r] != (b, A.cod[alpha]):
                raise MalformedAction(f"left action of {alpha} on {s} missing or misplaced", alpha=alpha, s=s)
        for beta in B.in_arrows[b]:
            r = R.get((s, beta))
            if r is None or not 0 <= r < S.n_elements or S.anchor[r] != (B.dom[beta], a):
                raise MalformedAction(f"right action of {beta} on {s} missing or misplaced", s=s, beta=beta)
    expected_left = sum(len(A.out_arrows[a]) for _, a in S.anchor)
    expected_right = sum(len(B.in_arrows[b]) for b, _ in S.anchor)
    if len(L) != expected_left or len(R) != expected_right:
        raise MalformedAction("action tables have entries outside the distributor")

    for s, (b, a) in enumerate(S.anchor):
        for alpha in A.out_arrows[a]:
            for beta in B.in_arrows[b]:
                if R[L[alpha, s], beta] != L[alpha, R[s, beta]]:
                    raise ActionsIncompatible(
                        f"({alpha}·{s})·{beta} != {alpha}·({s}·{beta})", alpha=alpha, s=s, beta=beta
                    )
    for s, (b, a) in enumerate(S.anchor):
        if L[A.identity[a], s] != s:
            raise LeftActionNotFunctorial(f"identity does not fix {s}", alpha=A.identity[a], s=s)
        for alpha in A.out_arrows[a]:
            for alpha2 in A.out_arrows[A.cod[alpha]]:
                if L[A.mul(alpha2, alpha), s] != L[alpha2, L[alpha, s]]:
                    raise LeftActionNotFunctorial(
                        f"({alpha2}∘{alpha})·{s} != {alpha2}·({alpha}·{s})", alpha=alpha, alpha2=alpha2, s=s
                    )
    for s, (b, a) in enumerate(S.anchor):
        if R[s, B.identity[b]] != s:
            raise RightActionNotFunctorial(f"identity does not fix {s}", beta=B.identity[b], s=s)
        for beta in B.in_arrows[b]:
            for beta2 in B.in_arrows[B.dom[beta]]:
                if R[s, B.mul(beta, beta2)] != R[R[s, beta], beta2]:
                    raise RightActionNotFunctorial(
                        f"{s}·({beta}∘{beta2}) != ({s}·{beta})·{beta2}", beta=beta, beta2=beta2, s=s
                    )
    return S


def check_distributor(S):
    return validate_distributor(S.source, S.target, S.sizes(), S.left, S.right, S.labels)


def hom_distributor(A):
    """``Hom_A`` in ``Dist(A, A)``; element labels are the underlying arrows."""
    sizes = {(b, a): len(A.hom(b, a)) for b in A.objects for a in A.objects}
    labels = [f for b in A.objects for a in A.objects for f in A.hom(b, a)]
    index = {f: i for i, f in enumerate(labels)}
    left = {(alpha, s): index[A.mul(alpha, f)] for s, f in enumerate(labels) for alpha in A.out_arrows[A.cod[f]]}
    right = {(s, beta): index[A.mul(f, beta)] for s, f in enumerate(labels) for beta in A.in_arrows[A.dom[f]]}
    return Distributor(A, A, sizes, left, right, labels)


def is_distributor_iso(S, T, phi):
    """Is the element map ``phi`` a fiberwise bijection commuting with both actions?"""
    if S.source != T.source or S.target != T.target:
        return Verdict(False, {"reason": "different endpoints"})
    if len(phi) != S.n_elements or S.n_elements != T.n_elements or len(set(phi)) != T.n_elements:
        return Verdict(False, {"reason": "not a bijection"})
    for s, t in enumerate(phi):
        if S.anchor[s] != T.anchor[t]:
            return Verdict(False, {"reason": "fiber not preserved", "element": s})
    for (alpha, s), r in S.left.items():
        if phi[r] != T.left[alpha, phi[s]]:
            return Verdict(False, {"reason": "left action", "alpha": alpha, "element": s})
    for (s, beta), r in S.right.items():
        if phi[r] != T.right[phi[s], beta]:
            return Verdict(False, {"reason": "right action", "beta": beta, "element": s})
    return Verdict(True)


# ------------------------------------------------------------------- spans


class Span:
    """A span of groupoids ``A <-Q- E -P-> B``.

    The fibration flags are computed on first access.  ``distributor`` is
    set when the span is the elements span of a distributor.
    """

    def __init__(self, left, right, distributor=None):
        if left.source is not right.source and left.source != right.source:
            raise PreconditionViolated("legs of a span must share their source")
        self.left = left
        self.right = right
        self.distributor = distributor

    @property
    def apex(self):
        return self.left.source

    @property
    def A(self):
        return self.left.target

    @property
    def B(self):
        return self.right.target

    @cached_property
    def pairing(self):
        return pairing(self.left, self.right)

    @cached_property
    def two_sided(self):
        return check_two_sided(self)

    @cached_property
    def dfib_into_product(self):
        return is_discrete_fibration(self.pairing)

    @cached_property
    def opfib_into_product(self):
        return is_discrete_opfibration(self.pairing)

    def __repr__(self):
        return f"Span({self.A!r} <- {self.apex!r} -> {self.B!r})"


TwoSidedFibSpan = Span


def identity_span(A):
    from .groupoid import identity_functor

    return Span(identity_functor(A), identity_functor(A))


def elements_span(S):
    """The discrete two-sided fibration ``A <- 𝕊 -> B`` of a distributor.

    Objects of 𝕊 are the elements of ``S``; an arrow ``s -> s'`` is a pair
    ``(alpha, beta)`` with ``alpha·s == s'·beta``.  Arrows are numbered by
    ``(s', alpha, beta)``.
    """
    A, B = S.source, S.target
    L, R = S.left, S.right
    arr_index = {}
    dom, cod, over_a, over_b = [], [], [], []
    for s2, (b2, a2) in enumerate(S.anchor):
        for alpha in A.in_arrows[a2]:
            ainv = A.inverse[alpha]
            for beta in B.in_arrows[b2]:
                arr_index[s2, alpha, beta] = len(dom)
                dom.append(L[ainv, R[s2, beta]])
                cod.append(s2)
                over_a.append(alpha)
                over_b.append(beta)
    identity = [arr_index[s, A.identity[a], B.identity[b]] for s, (b, a) in enumerate(S.anchor)]
    inverse = [arr_index[dom[k], A.inverse[over_a[k]], B.inverse[over_b[k]]] for k in range(len(dom))]
    amul, bmul = A.mul, B.mul

    def mul(g, f):
        return arr_index[cod[g], amul(over_a[g], over_a[f]), bmul(over_b[g], over_b[f])]

    E = FinGroupoid(S.n_elements, dom, cod, identity, inverse, mul)
    Q = GpdFunctor(E, A, [a for _, a in S.anchor], over_a)
    P = GpdFunctor(E, B, [b for b, _ in S.anchor], over_b)
    span = Span(Q, P, distributor=S)
    span._arrow_index = arr_index
    return span


def _vertical_lifts(span):
    """Index the Q-vertical and P-vertical arrows of a span.

    ``qv[e2][beta]``: arrows into ``e2`` with ``P = beta`` and ``Q = id``;
    ``pv[e][alpha]``: arrows out of ``e`` with ``Q = alpha`` and ``P = id``.
    """
    E, Q, P = span.apex, span.left, span.right
    A, B = Q.target, P.target
    qv = [{} for _ in E.objects]
    pv = [{} for _ in E.objects]
    for eps in E.arrows:
        qa, pb = Q.arr_map[eps], P.arr_map[eps]
        if qa == A.identity[Q.obj_map[E.cod[eps]]]:
            qv[E.cod[eps]].setdefault(pb, []).append(eps)
        if pb == B.identity[P.obj_map[E.dom[eps]]]:
            pv[E.dom[eps]].setdefault(qa, []).append(eps)
    return qv, pv


def check_two_sided(span):
    """Check the three clauses of a discrete two-sided fibration by enumeration."""
    E, Q, P = span.apex, span.left, span.right
    A, B = Q.target, P.target
    qv, pv = _vertical_lifts(span)
    for e2 in E.objects:
        for beta in B.in_arrows[P.obj_map[e2]]:
            n = len(qv[e2].get(beta, ()))
            if n != 1:
                return Verdict(False, {"item": "i", "arrow": beta, "object": e2, "lifts": n})
    for e in E.objects:
        for alpha in A.out_arrows[Q.obj_map[e]]:
            n = len(pv[e].get(alpha, ()))
            if n != 1:
                return Verdict(False, {"item": "ii", "arrow": alpha, "object": e, "lifts": n})
    for eps in E.arrows:
        (lift_a,) = pv[E.dom[eps]][Q.arr_map[eps]]
        (lift_b,) = qv[E.cod[eps]][P.arr_map[eps]]
        if E.cod[lift_a] != E.dom[lift_b] or E.mul(lift_b, lift_a) != eps:
            return Verdict(False, {"item": "iii", "arrow": eps})
    return Verdict(True)


def check_dfib_into_product(span):
    return span.dfib_into_product


def check_opfib_into_product(span):
    return span.opfib_into_product


def span_to_distributor(span):
    """Read a distributor off a discrete two-sided fibration.

    ``S(b, a)`` is the set of apex objects over ``(a, b)``, ordered by
    index; element labels are those apex objects.
    """
    verdict = span.two_sided
    if not verdict:
        raise NotTwoSided("span is not a discrete two-sided fibration", **verdict.witness)
    E, Q, P = span.apex, span.left, span.right
    A, B = Q.target, P.target
    sizes = {}
    for e in E.objects:
        key = (P.obj_map[e], Q.obj_map[e])
        sizes[key] = sizes.get(key, 0) + 1
    order = sorted(E.objects, key=lambda e: (P.obj_map[e], Q.obj_map[e], e))
    index = {e: i for i, e in enumerate(order)}
    qv, pv = _vertical_lifts(span)
    left, right = {}, {}
    for e in E.objects:
        s = index[e]
        for alpha, (eps,) in pv[e].items():
            left[alpha, s] = index[E.cod[eps]]
        for beta, (eps,) in qv[e].items():
            right[s, beta] = index[E.dom[eps]]
    return Distributor(A, B, sizes, left, right, labels=order)


def two_sided_lift(span, alpha, beta, s2):
    """Lift ``(alpha, beta)`` at ``s2``; returns ``(s, arrow s -> s2)``."""
    if not span.two_sided:
        raise PreconditionViolated("span is not a discrete two-sided fibration")
    E, Q, P = span.apex, span.left, span.right
    A, B = Q.target, P.target
    if Q.obj_map[s2] != A.cod[alpha] or P.obj_map[s2] != B.cod[beta]:
        raise PreconditionViolated(f"object {s2} does not lie over the codomains")
    S = span.distributor
    if S is not None:
        s = S.left[A.inverse[alpha], S.right[s2, beta]]
        return s, span._arrow_index[s2, alpha, beta]
    return _lift_by_verticals(span, alpha, beta, s2)


def _lift_by_verticals(span, alpha, beta, s2):
    # lift alpha⁻¹ P-vertically at s2, then beta Q-vertically at its end
    E = span.apex
    A = span.left.target
    qv, pv = _vertical_lifts(span)
    (eps1,) = pv[s2][A.inverse[alpha]]
    (eps2,) = qv[E.cod[eps1]][beta]
    return E.dom[eps2], E.mul(E.inverse[eps1], eps2)
