"""Two ways of composing relators between groupoids, and the map between them.

Route 1 composes the elements spans by pullback and reflects the result
back into distributors through the comprehensive factorization.  Route 2
is the coend: pairs ``(t, s)`` modulo ``(t, s) ~ (beta·t, s·beta⁻¹)``.
:func:`canonical_comparison` builds the map from route 1 to route 2 and
checks that it is an isomorphism of distributors.
"""

from dataclasses import dataclass, field

from .distributors import Distributor, Span, elements_span, hom_distributor, is_distributor_iso, span_to_distributor
from .errors import ComparisonFailed, PreconditionViolated
from .factorization import comprehensive_factorization
from .groupoid import Verdict, pullback_groupoid
from .unionfind import UnionFind


def _check_composable(S, T):
    if S.target is not T.source and S.target != T.source:
        raise PreconditionViolated("distributors do not share the middle groupoid")


def compose_spans(sp1, sp2):
    """``A <- E1 -> B`` then ``B <- E2 -> C`` composed by strict pullback over ``B``."""
    if sp1.B is not sp2.A and sp1.B != sp2.A:
        raise PreconditionViolated("spans do not share the middle groupoid")
    _, p1, p2 = pullback_groupoid(sp1.right, sp2.left)
    return Span(p1.then(sp1.left), p2.then(sp2.right))


class TensorProduct(Distributor):
    """``T⊗S`` with provenance.

    ``class_of[t, s]`` is the element containing the pair; element ``x`` is
    named by ``representative[x] == (b, t, s)``, the least triple of its
    class, and ``members[x]`` lists all its pairs ``(t, s)``.
    """

    def __init__(self, first, second, sizes, left, right, representative, members, class_of):
        super().__init__(first.source, second.target, sizes, left, right, labels=[(t, s) for _, t, s in representative])
        self.first = first
        self.second = second
        self.representative = tuple(representative)
        self.members = tuple(members)
        self.class_of = class_of


def compose_distributors(S, T):
    """The coend composite ``T⊗S in Dist(A, C)`` of ``S in Dist(A, B)`` and ``T in Dist(B, C)``.

    Pairs over every middle object are merged by union-find along each
    single move ``(t, s) ~ (beta·t, s·beta⁻¹)``; every move is invertible,
    so the closure is already symmetric.
    """
    _check_composable(S, T)
    B = S.target
    pairs = []
    for b in B.objects:
        ts = [t for t, (_, b2) in enumerate(T.anchor) if b2 == b]
        ss = [s for s, (b2, _) in enumerate(S.anchor) if b2 == b]
        pairs.extend((b, t, s) for t in ts for s in ss)
    index = {(t, s): i for i, (_, t, s) in enumerate(pairs)}
    uf = UnionFind(len(pairs))
    TL, SR, inv = T.left, S.right, B.inverse
    for i, (b, t, s) in enumerate(pairs):
        for beta in B.out_arrows[b]:
            uf.union(i, index[TL[beta, t], SR[s, inv[beta]]])

    # pairs are enumerated in increasing (b, t, s), so the first member is least
    classes = {}
    for i, (b, t, s) in enumerate(pairs):
        classes.setdefault(uf.find(i), []).append(i)
    named = sorted(
        ((T.anchor[pairs[m[0]][1]][0], S.anchor[pairs[m[0]][2]][1]), pairs[m[0]], m) for m in classes.values()
    )
    sizes, representative, members, class_of = {}, [], [], {}
    for x, ((c, a), rep, m) in enumerate(named):
        sizes[c, a] = sizes.get((c, a), 0) + 1
        representative.append(rep)
        members.append(tuple((pairs[i][1], pairs[i][2]) for i in m))
        for i in m:
            class_of[pairs[i][1], pairs[i][2]] = x

    A, C = S.source, T.target
    SL, TR = S.left, T.right
    left, right = {}, {}
    for x, ((c, a), _, m) in enumerate(named):
        for alpha in A.out_arrows[a]:
            images = {class_of[pairs[i][1], SL[alpha, pairs[i][2]]] for i in m}
            if len(images) != 1:
                raise ComparisonFailed("left action on T⊗S is not well defined", alpha=alpha, element=x)
            left[alpha, x] = images.pop()
        for gamma in C.in_arrows[c]:
            images = {class_of[TR[pairs[i][1], gamma], pairs[i][2]] for i in m}
            if len(images) != 1:
                raise ComparisonFailed("right action on T⊗S is not well defined", gamma=gamma, element=x)
            right[x, gamma] = images.pop()
    return TensorProduct(S, T, sizes, left, right, representative, members, class_of)


@dataclass(frozen=True)
class Reflection:
    """A span reflected into distributors.

    ``unit`` is the final part ``E -> M`` of the factorization of
    ``<Q, P>``; ``span`` is ``A <- M -> C``; element ``x`` of
    ``distributor`` is the middle object ``distributor.labels[x]``.
    """

    distributor: Distributor
    unit: object
    span: Span
    factorization: object = field(repr=False)


def reflect_span(span):
    result = comprehensive_factorization(span.pairing)
    p = result.dfib_part
    C = span.B
    n0, n1 = C.n_objects, C.n_arrows
    from .groupoid import GpdFunctor

    M = result.middle
    Q = GpdFunctor(M, span.A, [z // n0 for z in p.obj_map], [f // n1 for f in p.arr_map])
    P = GpdFunctor(M, C, [z % n0 for z in p.obj_map], [f % n1 for f in p.arr_map])
    reflected = Span(Q, P)
    return Reflection(span_to_distributor(reflected), result.final_part, reflected, result)


def _fiber_key(key):
    c, a = key
    return f"{c},{a}"


@dataclass(frozen=True)
class Comparison:
    """The canonical map ``R(T⋄S) -> T⊗S`` and its verdict."""

    mapping: tuple
    verdict: dict
    route1: Distributor
    route2: Distributor


def canonical_comparison(S, T):
    """Compare the reflected span composite with the coend composite.

    A middle object of the reflection is a component of some ``(z/<Q,P>)``
    with representative ``(beta, (s, t))``, ``beta = (alpha, gamma)``.  It
    is sent to the class of ``(t·gamma, alpha⁻¹·s)``.  Every member of the
    component is mapped and must land in the same class.
    """
    _check_composable(S, T)
    A, C = S.source, T.target
    route2 = compose_distributors(S, T)
    span = compose_spans(elements_span(S), elements_span(T))
    refl = reflect_span(span)
    route1 = refl.distributor
    apex = span.apex
    members = refl.factorization.members
    n1 = C.n_arrows
    SL, TR, ainv = S.left, T.right, A.inverse

    def image(beta, e):
        s, t = apex.obj_labels[e]
        return route2.class_of[TR[t, beta % n1], SL[ainv[beta // n1], s]]

    mapping = []
    for x in route1.elements:
        m = route1.labels[x]
        images = {image(beta, e) for beta, e in members[m]}
        if len(images) != 1:
            raise ComparisonFailed(
                "canonical map is not well defined", fiber=_fiber_key(route1.anchor[x]), element=x
            )
        mapping.append(images.pop())

    sizes1 = {_fiber_key(k): len(v) for k, v in route1.fibers.items()}
    sizes2 = {_fiber_key(k): len(v) for k, v in route2.fibers.items()}
    keys = sorted(set(route1.fibers) | set(route2.fibers))
    for key in keys:
        src = route1.fiber(*key)
        img = {mapping[x] for x in src}
        if len(img) != len(src) or img != set(route2.fiber(*key)):
            raise ComparisonFailed(
                "canonical map is not bijective", fiber=_fiber_key(key), route1_size=len(src),
                route2_size=len(route2.fiber(*key)),
            )
    compat = is_distributor_iso(route1, route2, mapping)
    if not compat:
        raise ComparisonFailed("canonical map does not commute with the actions", **compat.witness)
    verdict = {
        "fibers_checked": len(keys),
        "bijective": True,
        "action_compatible": True,
        "route1_sizes": sizes1,
        "route2_sizes": sizes2,
    }
    return Comparison(tuple(mapping), verdict, route1, route2)


def _graph_to_iso(X, Y, graph, what):
    """Turn a relation given as ``(x, y)`` pairs into an isomorphism verdict."""
    mapping = [None] * X.n_elements
    for x, y in graph:
        if mapping[x] is None:
            mapping[x] = y
        elif mapping[x] != y:
            return Verdict(False, {"law": what, "reason": "not well defined", "element": x})
    if None in mapping:
        return Verdict(False, {"law": what, "reason": "not total", "element": mapping.index(None)})
    verdict = is_distributor_iso(X, Y, mapping)
    if not verdict:
        return Verdict(False, {"law": what, **verdict.witness})
    return Verdict(True, {"law": what, "mapping": tuple(mapping)})


def check_associativity(S, T, U):
    """``(U⊗T)⊗S ≅ U⊗(T⊗S)`` via ``[[u, t], s] ↦ [u, [t, s]]``."""
    _check_composable(S, T)
    _check_composable(T, U)
    UT, TS = compose_distributors(T, U), compose_distributors(S, T)
    X, Y = compose_distributors(S, UT), compose_distributors(TS, U)
    graph = []
    for s, (b, _) in enumerate(S.anchor):
        for t, (c, b2) in enumerate(T.anchor):
            if b2 != b:
                continue
            for u, (_, c2) in enumerate(U.anchor):
                if c2 == c:
                    x = X.class_of[UT.class_of[u, t], s]
                    y = Y.class_of[u, TS.class_of[t, s]]
                    graph.append((x, y))
    return _graph_to_iso(X, Y, graph, "associativity")


def check_units(S):
    """Both unit laws: ``S⊗Hom_A ≅ S`` and ``Hom_B⊗S ≅ S``."""
    A, B = S.source, S.target
    HA, HB = hom_distributor(A), hom_distributor(B)
    right_unit = compose_distributors(HA, S)
    graph = [(x, S.left[HA.labels[h], s]) for x, (_, s, h) in enumerate(right_unit.representative)]
    graph += [(right_unit.class_of[s, h], S.left[HA.labels[h], s]) for s, h in right_unit.class_of]
    v = _graph_to_iso(right_unit, S, graph, "right unit")
    if not v:
        return v
    left_unit = compose_distributors(S, HB)
    graph = [(left_unit.class_of[y, s], S.right[s, HB.labels[y]]) for y, s in left_unit.class_of]
    return _graph_to_iso(left_unit, S, graph, "left unit")
