"""The (final, discrete fibration) factorization system on finite groupoids."""

from dataclasses import dataclass

from .errors import MultipleFillers, NoFiller, NotFunctorial, BoundaryMismatch, PreconditionViolated
from .groupoid import (
    FinGroupoid,
    GpdFunctor,
    Verdict,
    comma_category,
    opposite_functor,
    pi0,
    validate_functor,
)
from .unionfind import UnionFind


def is_discrete_fibration(F):
    """Every ``beta: b -> F(a')`` has exactly one lift with codomain ``a'``."""
    B = F.target
    for beta in B.arrows:
        for a2 in F.object_fiber(B.cod[beta]):
            n = len(F.lifts_at(beta, a2))
            if n != 1:
                return Verdict(False, {"arrow": beta, "object": a2, "lifts": n})
    return Verdict(True)


def is_discrete_opfibration(F):
    return is_discrete_fibration(opposite_functor(F))


def is_final(F):
    """Every comma groupoid ``(b/F)`` is non-empty and connected."""
    for b in F.target.objects:
        comma = comma_category(b, F)
        n = len(pi0(comma.groupoid))
        if n != 1:
            return Verdict(False, {"object": b, "components": n})
    return Verdict(True)


def is_initial(F):
    return is_final(opposite_functor(F))


def _dfib_verdict(F):
    v = F.__dict__.get("_dfib_verdict")
    if v is None:
        v = F.__dict__["_dfib_verdict"] = is_discrete_fibration(F)
    return v


def dfib_lift(F, beta, a2):
    """The unique arrow ``alpha`` with ``cod alpha == a2`` and ``F(alpha) == beta``."""
    if not _dfib_verdict(F):
        raise PreconditionViolated("functor is not a discrete fibration")
    if F.obj_map[a2] != F.target.cod[beta]:
        raise PreconditionViolated(f"F({a2}) is not the codomain of arrow {beta}")
    (alpha,) = F.lifts_at(beta, a2)
    return alpha


@dataclass(frozen=True)
class FactorizationResult:
    """``input == dfib_part ∘ final_part`` through ``middle``.

    Middle object ``i`` is the component of ``(b/F)`` named by its least
    member: ``representatives[i] == (b, beta, a)``.  ``members[i]`` lists
    every ``(beta, a)`` in that component and ``class_of[b]`` maps each
    ``(beta, a)`` in ``(b/F)`` to its middle object.
    """

    final_part: GpdFunctor
    middle: FinGroupoid
    dfib_part: GpdFunctor
    representatives: tuple
    members: tuple
    class_of: tuple

    def to_json(self):
        from .jsonio import functor_to_json, groupoid_to_json

        return {
            "middle": groupoid_to_json(self.middle),
            "final_part": functor_to_json(self.final_part),
            "dfib_part": functor_to_json(self.dfib_part),
            "provenance": {
                "representatives": [list(r) for r in self.representatives],
                "naming": "least (beta, a) of each component of (b/F)",
            },
        }


def comma_components(b, F):
    """Components of ``(b/F)`` without materializing it as a groupoid.

    Returns ``(pairs, labels)`` with ``pairs`` sorted and ``labels[i]`` the
    component number of ``pairs[i]``, components numbered by least member.
    Only a generating set of arrows of the source is traversed: the
    connecting relation is closed under composites and inverses.
    """
    A, B = F.source, F.target
    pairs = sorted((beta, a) for a in A.objects for beta in B.hom(b, F.obj_map[a]))
    index = {p: i for i, p in enumerate(pairs)}
    uf = UnionFind(len(pairs))
    bmul, amap, acod = B.mul, F.arr_map, A.cod
    by_object = [[] for _ in A.objects]
    for i, (_, a) in enumerate(pairs):
        by_object[a].append(i)
    for alpha in A.generating_arrows:
        x, y, fa = A.dom[alpha], acod[alpha], amap[alpha]
        for i in by_object[x]:
            uf.union(i, index[bmul(fa, pairs[i][0]), y])
    return pairs, uf.labels()


def comprehensive_factorization(F):
    """Factor ``F: A -> B`` as a final functor followed by a discrete fibration.

    The middle groupoid has one object per component of each ``(b/F)``;
    an arrow ``beta': b' -> b`` acts on components by ``[(beta, a)] ↦
    [(beta∘beta', a)]``, and the arrows of the middle are the pairs
    ``(beta', x)`` going from ``x·beta'`` to ``x``.
    """
    A, B = F.source, F.target
    reps, members, class_of = [], [], []
    for b in B.objects:
        pairs, labels = comma_components(b, F)
        first = len(reps)
        n_blocks = max(labels, default=-1) + 1
        block_members = [[] for _ in range(n_blocks)]
        for p, lab in zip(pairs, labels):
            block_members[lab].append(p)
        for bm in block_members:
            beta, a = bm[0]
            reps.append((b, beta, a))
            members.append(tuple(bm))
        class_of.append({p: first + lab for p, lab in zip(pairs, labels)})

    n = len(reps)
    bmul = B.mul

    def act(x, beta2):
        b, beta, a = reps[x]
        return class_of[B.dom[beta2]][bmul(beta, beta2), a]

    arr_index = {}
    dom, cod, over = [], [], []
    for x, (b, _, _) in enumerate(reps):
        for beta2 in B.in_arrows[b]:
            arr_index[x, beta2] = len(dom)
            dom.append(act(x, beta2))
            cod.append(x)
            over.append(beta2)
    identity = [arr_index[x, B.identity[b]] for x, (b, _, _) in enumerate(reps)]
    inverse = [arr_index[dom[k], B.inverse[over[k]]] for k in range(len(dom))]

    def mul(g, f):
        return arr_index[cod[g], bmul(over[g], over[f])]

    M = FinGroupoid(n, dom, cod, identity, inverse, mul, obj_labels=tuple(reps), arr_labels=tuple(over))
    dfib = GpdFunctor(M, B, [b for b, _, _ in reps], over)
    obj = [class_of[F.obj_map[a]][B.identity[F.obj_map[a]], a] for a in A.objects]
    arr = [arr_index[obj[A.cod[alpha]], F.arr_map[alpha]] for alpha in A.arrows]
    final = GpdFunctor(A, M, obj, arr)
    return FactorizationResult(final, M, dfib, tuple(reps), tuple(members), tuple(class_of))


@dataclass(frozen=True)
class LiftingSquare:
    """``right ∘ top == bottom ∘ left``, with ``left: A -> B`` and ``right: C -> D``."""

    top: GpdFunctor
    bottom: GpdFunctor
    left: GpdFunctor
    right: GpdFunctor

    def __post_init__(self):
        top, bottom, left, right = self.top, self.bottom, self.left, self.right
        for a in left.source.objects:
            if right.obj_map[top.obj_map[a]] != bottom.obj_map[left.obj_map[a]]:
                raise PreconditionViolated(f"square does not commute at object {a}")
        for f in left.source.arrows:
            if right.arr_map[top.arr_map[f]] != bottom.arr_map[left.arr_map[f]]:
                raise PreconditionViolated(f"square does not commute at arrow {f}")


def orthogonal_filler(square):
    """The unique ``d`` with ``d ∘ left == top`` and ``right ∘ d == bottom``.

    Each object ``b`` is sent to the domain of the lift, through ``right``,
    of ``bottom(beta)`` at ``top(a)`` for a comma object ``(beta, a)`` of
    ``(b/left)``.  Every representative is tried and must agree.
    """
    top, bottom, left, right = square.top, square.bottom, square.left, square.right
    A, B, C = left.source, left.target, right.source
    note = f"left final: {bool(is_final(left))}; right discrete fibration: {bool(is_discrete_fibration(right))}"

    obj = []
    for b in B.objects:
        comma = [(beta, a) for a in A.objects for beta in B.hom(b, left.obj_map[a])]
        if comma:
            found = set()
            for beta, a in comma:
                lifts = right.lifts_at(bottom.arr_map[beta], top.obj_map[a])
                if not lifts:
                    raise NoFiller(f"no lift for object {b} ({note})")
                if len(lifts) > 1:
                    raise MultipleFillers(f"several lifts for object {b} ({note})")
                found.add(C.dom[lifts[0]])
            if len(found) > 1:
                raise NoFiller(f"representatives of ({b}/left) disagree ({note})")
            obj.append(found.pop())
        else:
            fiber = right.object_fiber(bottom.obj_map[b])
            if not fiber:
                raise NoFiller(f"empty fiber over bottom({b}) ({note})")
            if len(fiber) > 1:
                raise MultipleFillers(f"{len(fiber)} candidates for object {b} ({note})")
            obj.append(fiber[0])

    arr = []
    for beta in B.arrows:
        lifts = right.lifts_at(bottom.arr_map[beta], obj[B.cod[beta]])
        if len(lifts) != 1:
            cls = NoFiller if not lifts else MultipleFillers
            raise cls(f"arrow {beta} has {len(lifts)} lifts ({note})")
        if C.dom[lifts[0]] != obj[B.dom[beta]]:
            raise NoFiller(f"lift of arrow {beta} has the wrong domain ({note})")
        arr.append(lifts[0])
    try:
        d = validate_functor(obj, arr, B, C)
    except (NotFunctorial, BoundaryMismatch) as exc:
        raise NoFiller(f"diagonal is not a functor ({note})") from exc
    if left.then(d) != top or d.then(right) != bottom:
        raise NoFiller(f"diagonal does not fill the square ({note})")
    return d
