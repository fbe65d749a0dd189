"""Finite groupoids, functors between them, and elementary constructions.

Objects and arrows are dense integer indices.  ``compose(g, f)`` means
"``f`` first, then ``g``" and is defined exactly when ``cod(f) == dom(g)``.
"""

from dataclasses import dataclass
from functools import cached_property

from .errors import (
    BoundaryMismatch,
    CompositionDomainMismatch,
    DuplicateEntry,
    IncompleteTable,
    IndexOutOfRange,
    MissingIdentity,
    NotAssociative,
    NotFunctorial,
    NotInvertible,
    SearchBudgetExceeded,
)
from .groups import Group, extend_homomorphism
from .unionfind import UnionFind

DEFAULT_SEARCH_BUDGET = 10**6


@dataclass(frozen=True)
class Verdict:
    """Outcome of a yes/no check plus the witness explaining a ``False``."""

    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


class FinGroupoid:
    """A finite groupoid given by its structure tables.

    ``compose`` is either a mapping ``(g, f) -> g∘f`` over all composable
    pairs or a callable computing it (used by derived groupoids such as
    products, whose full tables would be large).  Instances are treated as
    immutable.  Use :func:`validate_groupoid` to build one from raw data.
    """

    def __init__(self, n_objects, dom, cod, identity, inverse, compose, *, obj_labels=None, arr_labels=None):
        self.n_objects = int(n_objects)
        self.dom = tuple(dom)
        self.cod = tuple(cod)
        self.identity = tuple(identity)
        self.inverse = tuple(inverse)
        if callable(compose):
            self._fn = compose
            self._table = None
        else:
            self._fn = None
            self._table = dict(compose)
        self.obj_labels = obj_labels
        self.arr_labels = arr_labels

    @property
    def n_arrows(self):
        return len(self.dom)

    @property
    def objects(self):
        return range(self.n_objects)

    @property
    def arrows(self):
        return range(len(self.dom))

    def mul(self, g, f):
        """Unchecked composite; callers guarantee ``cod f == dom g``."""
        if self._fn is not None:
            return self._fn(g, f)
        return self._table[g, f]

    def compose(self, g, f):
        if self.cod[f] != self.dom[g]:
            raise CompositionDomainMismatch(f"cod({f}) != dom({g})", g=g, f=f)
        return self.mul(g, f)

    @cached_property
    def _homs(self):
        homs = {}
        for f, (x, y) in enumerate(zip(self.dom, self.cod)):
            homs.setdefault((x, y), []).append(f)
        return {k: tuple(v) for k, v in homs.items()}

    def hom(self, x, y):
        return self._homs.get((x, y), ())

    @cached_property
    def generating_arrows(self):
        """Tree arrows plus vertex-group generators at each root; every arrow is a word in these."""
        gens = []
        for fr in frames(self):
            gens.extend(t for x, t in fr.tree.items() if x != fr.root)
            gens.extend(fr.vertex[i] for i in fr.group.generators())
        return tuple(gens)

    @cached_property
    def out_arrows(self):
        out = [[] for _ in range(self.n_objects)]
        for f, x in enumerate(self.dom):
            out[x].append(f)
        return tuple(tuple(a) for a in out)

    @cached_property
    def in_arrows(self):
        out = [[] for _ in range(self.n_objects)]
        for f, y in enumerate(self.cod):
            out[y].append(f)
        return tuple(tuple(a) for a in out)

    def composable_pairs(self):
        for f in self.arrows:
            for g in self.out_arrows[self.cod[f]]:
                yield g, f

    def compose_table(self):
        if self._table is not None:
            return dict(self._table)
        return {(g, f): self._fn(g, f) for g, f in self.composable_pairs()}

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinGroupoid):
            return NotImplemented
        return (
            self.n_objects == other.n_objects
            and self.dom == other.dom
            and self.cod == other.cod
            and self.identity == other.identity
            and self.inverse == other.inverse
            and all(self.mul(g, f) == other.mul(g, f) for g, f in self.composable_pairs())
        )

    def __hash__(self):
        return hash((self.n_objects, self.dom, self.cod))

    def __repr__(self):
        return f"FinGroupoid(objects={self.n_objects}, arrows={self.n_arrows})"


class GpdFunctor:
    """A functor between finite groupoids. Build with :func:`validate_functor`."""

    def __init__(self, source, target, obj_map, arr_map):
        self.source = source
        self.target = target
        self.obj_map = tuple(obj_map)
        self.arr_map = tuple(arr_map)

    def then(self, other):
        """``other ∘ self``."""
        return GpdFunctor(
            self.source,
            other.target,
            [other.obj_map[x] for x in self.obj_map],
            [other.arr_map[f] for f in self.arr_map],
        )

    @cached_property
    def _lifts(self):
        index = {}
        for a, (img, y) in enumerate(zip(self.arr_map, self.source.cod)):
            index.setdefault((img, y), []).append(a)
        return index

    def lifts_at(self, beta, y):
        """Source arrows with codomain ``y`` sent to ``beta``."""
        return self._lifts.get((beta, y), [])

    @cached_property
    def _obj_fibers(self):
        fib = [[] for _ in range(self.target.n_objects)]
        for x, y in enumerate(self.obj_map):
            fib[y].append(x)
        return tuple(tuple(f) for f in fib)

    def object_fiber(self, y):
        return self._obj_fibers[y]

    def __eq__(self, other):
        if not isinstance(other, GpdFunctor):
            return NotImplemented
        return (
            self.obj_map == other.obj_map
            and self.arr_map == other.arr_map
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self):
        return hash((self.obj_map, self.arr_map))

    def __repr__(self):
        return f"GpdFunctor({self.source!r} -> {self.target!r})"


# ---------------------------------------------------------------- validation


def _check_index(value, bound, what):
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value < bound:
        raise IndexOutOfRange(f"{what} {value!r} out of range 0..{bound - 1}", value=value)


def validate_groupoid(n_objects, dom, cod, compose, identities, inverses=None):
    """Check raw tables and return a :class:`FinGroupoid`.

    ``compose`` may be a mapping ``(g, f) -> gf`` or an iterable of
    ``[g, f, gf]`` triples.  ``inverses`` may be omitted, in which case they
    are searched for.  Raises the first violated axiom with its witnesses.
    """
    n_objects = int(n_objects)
    dom = [int(x) for x in dom]
    cod = [int(x) for x in cod]
    n = len(dom)
    if len(cod) != n:
        raise IncompleteTable("dom and cod have different lengths")
    for f in range(n):
        _check_index(dom[f], n_objects, "dom")
        _check_index(cod[f], n_objects, "cod")

    if hasattr(compose, "items"):
        triples = [(int(g), int(f), int(gf)) for (g, f), gf in compose.items()]
    else:
        triples = [tuple(int(v) for v in t) for t in compose]
    table = {}
    for g, f, gf in triples:
        for v in (g, f, gf):
            _check_index(v, n, "arrow")
        if (g, f) in table:
            raise DuplicateEntry(f"composite ({g},{f}) given twice", g=g, f=f)
        if cod[f] != dom[g]:
            raise CompositionDomainMismatch(f"composite given for non-composable ({g},{f})", g=g, f=f)
        if dom[gf] != dom[f] or cod[gf] != cod[g]:
            raise CompositionDomainMismatch(f"{g}∘{f}={gf} has wrong boundary", g=g, f=f)
        table[g, f] = gf
    out = [[] for _ in range(n_objects)]
    for f in range(n):
        out[dom[f]].append(f)
    for f in range(n):
        for g in out[cod[f]]:
            if (g, f) not in table:
                raise IncompleteTable(f"composite ({g},{f}) missing", g=g, f=f)

    identities = [int(i) for i in identities]
    if len(identities) != n_objects:
        raise IncompleteTable("one identity per object required")
    for x, i in enumerate(identities):
        _check_index(i, n, "identity")
        if dom[i] != x or cod[i] != x:
            raise MissingIdentity(f"identity of {x} is not a loop at {x}", object=x)
    for f in range(n):
        if table[identities[cod[f]], f] != f or table[f, identities[dom[f]]] != f:
            bad = dom[f] if table[f, identities[dom[f]]] != f else cod[f]
            raise MissingIdentity(f"identity of {bad} is not a unit for arrow {f}", object=bad, arrow=f)

    for f in range(n):
        for g in out[cod[f]]:
            gf = table[g, f]
            for h in out[cod[g]]:
                if table[h, gf] != table[table[h, g], f]:
                    raise NotAssociative(f"({h}∘{g})∘{f} != {h}∘({g}∘{f})", f=f, g=g, h=h)

    if inverses is None:
        inverses = []
        for f in range(n):
            cand = [g for g in out[cod[f]] if table[g, f] == identities[dom[f]] and table[f, g] == identities[cod[f]]]
            if not cand:
                raise NotInvertible(f"arrow {f} has no inverse", arrow=f)
            inverses.append(cand[0])
    inverses = [int(i) for i in inverses]
    if len(inverses) != n:
        raise IncompleteTable("one inverse per arrow required")
    for f, g in enumerate(inverses):
        _check_index(g, n, "inverse")
        if dom[g] != cod[f] or cod[g] != dom[f] or table[g, f] != identities[dom[f]] or table[f, g] != identities[cod[f]]:
            raise NotInvertible(f"inverse given for arrow {f} is not an inverse", arrow=f)
    return FinGroupoid(n_objects, dom, cod, identities, inverses, table)


def check_groupoid(G):
    """Re-run every axiom on an existing (possibly derived) groupoid."""
    return validate_groupoid(G.n_objects, G.dom, G.cod, G.compose_table(), G.identity, G.inverse)


def validate_functor(obj_map, arr_map, source, target):
    """Check the functor laws and return a :class:`GpdFunctor`."""
    obj_map = [int(x) for x in obj_map]
    arr_map = [int(x) for x in arr_map]
    if len(obj_map) != source.n_objects or len(arr_map) != source.n_arrows:
        raise IncompleteTable("maps must be total on the source")
    for x in obj_map:
        _check_index(x, target.n_objects, "object image")
    for f in arr_map:
        _check_index(f, target.n_arrows, "arrow image")
    for f in source.arrows:
        a = arr_map[f]
        if target.dom[a] != obj_map[source.dom[f]] or target.cod[a] != obj_map[source.cod[f]]:
            raise BoundaryMismatch(f"arrow {f} is sent to an arrow with the wrong boundary", arrow=f)
    for g, f in source.composable_pairs():
        if arr_map[source.mul(g, f)] != target.mul(arr_map[g], arr_map[f]):
            raise NotFunctorial(f"F({g}∘{f}) != F({g})∘F({f})", f=f, g=g)
    return GpdFunctor(source, target, obj_map, arr_map)


def check_functor(F):
    return validate_functor(F.obj_map, F.arr_map, F.source, F.target)


# -------------------------------------------------------------- constructors


def discrete(n):
    return FinGroupoid(n, range(n), range(n), range(n), range(n), {(i, i): i for i in range(n)})


def terminal():
    return discrete(1)


def group_groupoid(group):
    """The one-object groupoid of a group; arrow ``g`` is group element ``g``."""
    n = group.order
    table = {(g, f): group.mul(g, f) for g in range(n) for f in range(n)}
    return FinGroupoid(1, [0] * n, [0] * n, [group.identity], group.inverse, table)


def connected_groupoid(k, group):
    """``k`` objects, arrows ``(i, j, g): i -> j`` with id ``(i*k + j)*|G| + g``."""
    m = group.order
    dom, cod, labels = [], [], []
    for i in range(k):
        for j in range(k):
            for g in range(m):
                dom.append(i)
                cod.append(j)
                labels.append((i, j, g))

    def idx(i, j, g):
        return (i * k + j) * m + g

    table = {}
    for i, j, g in labels:
        for l in range(k):
            for h in range(m):
                table[idx(j, l, h), idx(i, j, g)] = idx(i, l, group.mul(h, g))
    identity = [idx(i, i, group.identity) for i in range(k)]
    inverse = [idx(j, i, group.inv(g)) for i, j, g in labels]
    return FinGroupoid(k, dom, cod, identity, inverse, table, arr_labels=tuple(labels))


def indiscrete(n):
    from .groups import trivial_group

    return connected_groupoid(n, trivial_group())


def action_groupoid(group, action):
    """Objects ``x``, arrows ``(g, x): x -> g·x`` with id ``g*n + x``."""
    n = len(action[0])
    m = group.order
    dom, cod, labels = [], [], []
    for g in range(m):
        for x in range(n):
            dom.append(x)
            cod.append(action[g][x])
            labels.append((g, x))
    table = {}
    for g, x in labels:
        y = action[g][x]
        for h in range(m):
            table[h * n + y, g * n + x] = group.mul(h, g) * n + x
    identity = [group.identity * n + x for x in range(n)]
    inverse = [group.inv(g) * n + action[g][x] for g, x in labels]
    return FinGroupoid(n, dom, cod, identity, inverse, table, arr_labels=tuple(labels))


def action_projection(group, action):
    """The functor from the action groupoid onto the one-object group groupoid."""
    E = action_groupoid(group, action)
    B = group_groupoid(group)
    return GpdFunctor(E, B, [0] * E.n_objects, [g for g, _ in E.arr_labels])


def disjoint_union(*groupoids):
    n_obj = 0
    n_arr = 0
    dom, cod, identity, inverse = [], [], [], []
    table = {}
    for G in groupoids:
        dom += [x + n_obj for x in G.dom]
        cod += [x + n_obj for x in G.cod]
        identity += [i + n_arr for i in G.identity]
        inverse += [i + n_arr for i in G.inverse]
        for (g, f), gf in G.compose_table().items():
            table[g + n_arr, f + n_arr] = gf + n_arr
        n_obj += G.n_objects
        n_arr += G.n_arrows
    return FinGroupoid(n_obj, dom, cod, identity, inverse, table)


def relabel(G, obj_perm, arr_perm):
    """Isomorphic copy with object ``x`` renamed ``obj_perm[x]`` (same for arrows).

    Returns ``(H, phi)`` with ``phi: G -> H`` the renaming isomorphism.
    """
    n, m = G.n_objects, G.n_arrows
    inv_arr = [0] * m
    for f, p in enumerate(arr_perm):
        inv_arr[p] = f
    dom = [obj_perm[G.dom[inv_arr[p]]] for p in range(m)]
    cod = [obj_perm[G.cod[inv_arr[p]]] for p in range(m)]
    identity = [0] * n
    for x in range(n):
        identity[obj_perm[x]] = arr_perm[G.identity[x]]
    inverse = [arr_perm[G.inverse[inv_arr[p]]] for p in range(m)]
    table = {(arr_perm[g], arr_perm[f]): arr_perm[gf] for (g, f), gf in G.compose_table().items()}
    H = FinGroupoid(n, dom, cod, identity, inverse, table)
    return H, GpdFunctor(G, H, obj_perm, arr_perm)


def identity_functor(G):
    return GpdFunctor(G, G, range(G.n_objects), range(G.n_arrows))


def to_terminal(G):
    return GpdFunctor(G, terminal(), [0] * G.n_objects, [0] * G.n_arrows)


def opposite(G):
    """Same arrows with dom/cod swapped; ``opposite(opposite(G)) == G``."""
    gmul = G.mul
    return FinGroupoid(G.n_objects, G.cod, G.dom, G.identity, G.inverse, lambda g, f: gmul(f, g))


def opposite_functor(F):
    return GpdFunctor(opposite(F.source), opposite(F.target), F.obj_map, F.arr_map)


def product(G, H):
    """Product groupoid; object ``(x, y)`` is ``x*|H0| + y``, arrow ``(f, g)`` is ``f*|H1| + g``.

    Composition is computed componentwise on demand.  ``factors`` records
    ``(G, H)``.
    """
    n0, n1 = H.n_objects, H.n_arrows
    dom = [G.dom[f] * n0 + H.dom[g] for f in G.arrows for g in H.arrows]
    cod = [G.cod[f] * n0 + H.cod[g] for f in G.arrows for g in H.arrows]
    identity = [G.identity[x] * n1 + H.identity[y] for x in G.objects for y in H.objects]
    inverse = [G.inverse[f] * n1 + H.inverse[g] for f in G.arrows for g in H.arrows]
    gmul, hmul = G.mul, H.mul

    def mul(p, q):
        return gmul(p // n1, q // n1) * n1 + hmul(p % n1, q % n1)

    P = FinGroupoid(G.n_objects * n0, dom, cod, identity, inverse, mul)
    P.factors = (G, H)
    return P


def projections(P):
    G, H = P.factors
    n0, n1 = H.n_objects, H.n_arrows
    p1 = GpdFunctor(P, G, [z // n0 for z in P.objects], [a // n1 for a in P.arrows])
    p2 = GpdFunctor(P, H, [z % n0 for z in P.objects], [a % n1 for a in P.arrows])
    return p1, p2


def pairing(F, G, target=None):
    """``<F, G>: X -> F.target × G.target``."""
    P = target if target is not None else product(F.target, G.target)
    n0, n1 = G.target.n_objects, G.target.n_arrows
    return GpdFunctor(
        F.source,
        P,
        [x * n0 + y for x, y in zip(F.obj_map, G.obj_map)],
        [f * n1 + g for f, g in zip(F.arr_map, G.arr_map)],
    )


def product_functor(F, G):
    """``F × G`` between product groupoids."""
    S = product(F.source, G.source)
    T = product(F.target, G.target)
    n0, n1 = G.source.n_objects, G.source.n_arrows
    m0, m1 = G.target.n_objects, G.target.n_arrows
    obj = [F.obj_map[z // n0] * m0 + G.obj_map[z % n0] for z in S.objects]
    arr = [F.arr_map[a // n1] * m1 + G.arr_map[a % n1] for a in S.arrows]
    return GpdFunctor(S, T, obj, arr)


def pullback_groupoid(F, G):
    """Strict pullback of ``F: X -> Z`` and ``G: Y -> Z``.

    Objects are pairs ``(x, y)`` with ``F x == G y`` and arrows pairs agreeing
    in ``Z``, both in lexicographic order.  Returns ``(P, p1, p2)``.
    """
    X, Y = F.source, G.source
    fib_obj = {}
    for y in Y.objects:
        fib_obj.setdefault(G.obj_map[y], []).append(y)
    objs = [(x, y) for x in X.objects for y in fib_obj.get(F.obj_map[x], ())]
    obj_index = {p: i for i, p in enumerate(objs)}
    fib_arr = {}
    for g in Y.arrows:
        fib_arr.setdefault(G.arr_map[g], []).append(g)
    arrs = [(f, g) for f in X.arrows for g in fib_arr.get(F.arr_map[f], ())]
    arr_index = {p: i for i, p in enumerate(arrs)}
    dom = [obj_index[X.dom[f], Y.dom[g]] for f, g in arrs]
    cod = [obj_index[X.cod[f], Y.cod[g]] for f, g in arrs]
    identity = [arr_index[X.identity[x], Y.identity[y]] for x, y in objs]
    inverse = [arr_index[X.inverse[f], Y.inverse[g]] for f, g in arrs]
    xmul, ymul = X.mul, Y.mul

    def mul(p, q):
        (f2, g2), (f1, g1) = arrs[p], arrs[q]
        return arr_index[xmul(f2, f1), ymul(g2, g1)]

    P = FinGroupoid(len(objs), dom, cod, identity, inverse, mul, obj_labels=tuple(objs), arr_labels=tuple(arrs))
    p1 = GpdFunctor(P, X, [x for x, _ in objs], [f for f, _ in arrs])
    p2 = GpdFunctor(P, Y, [y for _, y in objs], [g for _, g in arrs])
    return P, p1, p2


# ------------------------------------------------------------ comma category


@dataclass(frozen=True)
class CommaGroupoid:
    """The comma groupoid ``(b/F)``.

    ``pairs[i] = (beta, a)`` names object ``i`` (``beta: b -> F(a)``), sorted
    lexicographically; ``arrow_map[k]`` is the source arrow underlying arrow ``k``.
    """

    base_object: int
    functor: GpdFunctor
    groupoid: FinGroupoid
    pairs: tuple
    arrow_map: tuple

    @property
    def n_objects(self):
        return len(self.pairs)

    @property
    def projection(self):
        """The forgetful functor ``(b/F) -> source``."""
        return GpdFunctor(
            self.groupoid, self.functor.source, [a for _, a in self.pairs], self.arrow_map
        )


def comma_category(b, F):
    A, B = F.source, F.target
    pairs = sorted((beta, a) for a in A.objects for beta in B.hom(b, F.obj_map[a]))
    index = {p: i for i, p in enumerate(pairs)}
    dom, cod, arrow_map = [], [], []
    arr_index = {}
    for i, (beta, a) in enumerate(pairs):
        for alpha in A.out_arrows[a]:
            arr_index[i, alpha] = len(dom)
            dom.append(i)
            cod.append(index[B.mul(F.arr_map[alpha], beta), A.cod[alpha]])
            arrow_map.append(alpha)
    identity = [arr_index[i, A.identity[a]] for i, (_, a) in enumerate(pairs)]
    inverse = [arr_index[cod[k], A.inverse[arrow_map[k]]] for k in range(len(dom))]
    amul = A.mul

    def mul(g, f):
        return arr_index[dom[f], amul(arrow_map[g], arrow_map[f])]

    G = FinGroupoid(len(pairs), dom, cod, identity, inverse, mul, obj_labels=tuple(pairs), arr_labels=tuple(arrow_map))
    return CommaGroupoid(b, F, G, tuple(pairs), tuple(arrow_map))


# ------------------------------------------------------ components and homs


def component_labels(G):
    uf = UnionFind(G.n_objects)
    for x, y in zip(G.dom, G.cod):
        uf.union(x, y)
    return uf.labels()


def pi0(G):
    """Connected components as sorted tuples of objects, ordered by least member."""
    uf = UnionFind(G.n_objects)
    for x, y in zip(G.dom, G.cod):
        uf.union(x, y)
    return uf.blocks()


def is_full(F):
    A, B = F.source, F.target
    for a in A.objects:
        for a2 in A.objects:
            target_hom = B.hom(F.obj_map[a], F.obj_map[a2])
            image = {F.arr_map[f] for f in A.hom(a, a2)}
            if len(image) != len(target_hom):
                missing = next(beta for beta in target_hom if beta not in image)
                return Verdict(False, {"objects": (a, a2), "missing": missing})
    return Verdict(True)


def is_eso(F):
    labels = component_labels(F.target)
    hit = {labels[y] for y in F.obj_map}
    for b in F.target.objects:
        if labels[b] not in hit:
            return Verdict(False, {"object": b})
    return Verdict(True)


def is_iso(F):
    return (
        len(set(F.obj_map)) == F.target.n_objects == F.source.n_objects
        and len(set(F.arr_map)) == F.target.n_arrows == F.source.n_arrows
    )


def inverse_functor(F):
    obj = [0] * F.target.n_objects
    arr = [0] * F.target.n_arrows
    for x, y in enumerate(F.obj_map):
        obj[y] = x
    for f, g in enumerate(F.arr_map):
        arr[g] = f
    return GpdFunctor(F.target, F.source, obj, arr)


# -------------------------------------------------- frames and iso search


@dataclass(frozen=True)
class Frame:
    """A connected component presented by a root, tree arrows, and a vertex group.

    ``tree[x]`` is an arrow ``root -> x``; ``vertex`` lists the loops at the
    root, and ``group`` is the vertex group with element ``i`` being
    ``vertex[i]``.
    """

    root: int
    objects: tuple
    tree: dict
    vertex: tuple
    group: Group


def vertex_group(G, x):
    loops = G.hom(x, x)
    pos = {f: i for i, f in enumerate(loops)}
    table = [[pos[G.mul(g, f)] for f in loops] for g in loops]
    return Group(table, identity=pos[G.identity[x]]), loops


def frames(G):
    out = []
    for block in pi0(G):
        root = block[0]
        tree = {root: G.identity[root]}
        for x in block:
            if x not in tree:
                tree[x] = min(G.hom(root, x))
        group, loops = vertex_group(G, root)
        out.append(Frame(root, block, tree, loops, group))
    return out


def functor_from_frames(source, target, frames_, obj_images, tree_images, loop_images):
    """Assemble a functor from its values on a presentation.

    ``tree_images[x]`` must be an arrow ``F(root) -> F(x)`` and
    ``loop_images`` a homomorphism on each root's vertex group (mapping loop
    arrows to loop arrows).  Then ``F(f) = T(y) ∘ ψ(t_y⁻¹ f t_x) ∘ T(x)⁻¹``.
    """
    arr_map = [0] * source.n_arrows
    S, T = source, target
    for fr in frames_:
        for x in fr.objects:
            Tx_inv = T.inverse[tree_images[x]]
            for y in fr.objects:
                ty_inv = S.inverse[fr.tree[y]]
                for f in S.hom(x, y):
                    loop = S.mul(ty_inv, S.mul(f, fr.tree[x]))
                    arr_map[f] = T.mul(tree_images[y], T.mul(loop_images[loop], Tx_inv))
    return GpdFunctor(source, target, obj_images, arr_map)


def iso_over_base(m1, m2, budget=DEFAULT_SEARCH_BUDGET):
    """Find an isomorphism ``phi`` with ``m2 ∘ phi == m1``, or ``None``.

    Exhaustive backtracking over root images, tree-arrow images and images of
    vertex-group generators, pruned by fiber cardinalities.  Raises
    :class:`SearchBudgetExceeded` after ``budget`` search nodes.
    """
    M1, M2 = m1.source, m2.source
    if M1.n_objects != M2.n_objects or M1.n_arrows != M2.n_arrows:
        return None
    X = m1.target
    if sorted(m1.obj_map) != sorted(m2.obj_map) or sorted(m1.arr_map) != sorted(m2.arr_map):
        return None
    if X.n_objects != m2.target.n_objects or X.n_arrows != m2.target.n_arrows:
        return None

    def keys(G, m):
        labels = component_labels(G)
        sizes = {}
        for c in labels:
            sizes[c] = sizes.get(c, 0) + 1
        return [(m.obj_map[x], len(G.hom(x, x)), sizes[labels[x]]) for x in G.objects]

    k1, k2 = keys(M1, m1), keys(M2, m2)
    if sorted(k1) != sorted(k2):
        return None
    fr1 = frames(M1)
    nodes = [0]

    def tick():
        nodes[0] += 1
        if nodes[0] > budget:
            raise SearchBudgetExceeded(f"iso search exceeded {budget} nodes")

    used = [False] * M2.n_objects
    obj_img = [None] * M1.n_objects
    tree_img = {}
    loop_img = {}
    vertex_cache = {}

    def vgroup(y):
        if y not in vertex_cache:
            vertex_cache[y] = vertex_group(M2, y)
        return vertex_cache[y]

    def solve_component(ci):
        if ci == len(fr1):
            return True
        fr = fr1[ci]
        others = [x for x in fr.objects if x != fr.root]
        for y in M2.objects:
            if used[y] or k2[y] != k1[fr.root]:
                continue
            tick()
            used[y] = True
            obj_img[fr.root] = y
            tree_img[fr.root] = M2.identity[y]
            if assign_tree(ci, fr, others, 0, y):
                return True
            used[y] = False
        return False

    def assign_tree(ci, fr, others, i, y):
        if i == len(others):
            return assign_generators(ci, fr, y)
        x = others[i]
        want = m1.arr_map[fr.tree[x]]
        for c in M2.out_arrows[y]:
            z = M2.cod[c]
            if m2.arr_map[c] != want or used[z] or k2[z] != k1[x]:
                continue
            tick()
            used[z] = True
            obj_img[x] = z
            tree_img[x] = c
            if assign_tree(ci, fr, others, i + 1, y):
                return True
            used[z] = False
        return False

    def assign_generators(ci, fr, y):
        g2, loops2 = vgroup(y)
        gens = fr.group.generators()
        options = []
        for s in gens:
            want = m1.arr_map[fr.vertex[s]]
            options.append([j for j, c in enumerate(loops2) if m2.arr_map[c] == want])

        def rec(i, chosen):
            if i == len(gens):
                tick()
                hom = extend_homomorphism(fr.group, g2, dict(zip(gens, chosen)))
                if hom is None or len(set(hom)) != len(hom):
                    return False
                for s_idx, img in enumerate(hom):
                    loop_img[fr.vertex[s_idx]] = loops2[img]
                return solve_component(ci + 1)
            for j in options[i]:
                if rec(i + 1, chosen + [j]):
                    return True
            return False

        return rec(0, [])

    if not solve_component(0):
        return None
    phi = functor_from_frames(M1, M2, fr1, obj_img, tree_img, loop_img)
    if len(set(phi.arr_map)) != M2.n_arrows:
        return None
    if any(m2.arr_map[phi.arr_map[f]] != m1.arr_map[f] for f in M1.arrows):
        return None
    return phi
