"""Seeded random instances, valid by construction.

All randomness flows through a ``numpy.random.Generator`` built on PCG64;
:func:`make_rng` derives independent streams from ``(seed, *keys)`` with a
``SeedSequence``, so a trial can be replayed from its key alone.
"""

from dataclasses import dataclass

import numpy as np

from .distributors import Distributor, Span, elements_span, validate_distributor
from .groupoid import (
    GpdFunctor,
    connected_groupoid,
    disjoint_union,
    frames,
    functor_from_frames,
    pi0,
    relabel,
    validate_functor,
)
from .groups import Group, cyclic, direct_product, extend_homomorphism, klein_four, symmetric, trivial_group
from .internal import (
    InternalGroupoid,
    validate_internal_distributor,
    validate_internal_functor,
    validate_internal_groupoid,
)

GROUP_POOL = (trivial_group(), cyclic(2), cyclic(3), klein_four(), symmetric(3))


def make_rng(seed, *keys):
    """An independent PCG64 stream for ``(seed, *keys)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, keys)])))


@dataclass(frozen=True)
class Bounds:
    max_objects: int = 4
    max_group_order: int = 6
    max_arrows: int = 24
    max_fiber: int = 4
    max_carrier: int = 12

    def __post_init__(self):
        if min(self.max_objects, self.max_group_order, self.max_arrows, self.max_fiber, self.max_carrier) < 1:
            raise ValueError("bounds must be at least 1")


def _pick(rng, seq):
    return seq[int(rng.integers(len(seq)))]


# --------------------------------------------------------------- groupoids


def gen_groupoid(rng, bounds=Bounds(), pool=GROUP_POOL, n_objects=None):
    """A random disjoint union of connected pieces ``k`` objects × vertex group.

    The pieces are relabelled by random permutations of objects and arrows.
    """
    n = int(rng.integers(1, bounds.max_objects + 1)) if n_objects is None else n_objects
    groups = [g for g in pool if g.order <= bounds.max_group_order] or [trivial_group()]
    pieces, left, arrows = [], n, 0
    while left:
        k = int(rng.integers(1, left + 1))
        budget = bounds.max_arrows - arrows - (left - k)
        options = [g for g in groups if k * k * g.order <= budget]
        if not options:
            k = 1
            options = [g for g in groups if g.order <= max(budget, 1)] or [trivial_group()]
        group = _pick(rng, options)
        pieces.append(connected_groupoid(k, group))
        arrows += k * k * group.order
        left -= k
    G = disjoint_union(*pieces)
    H, _ = relabel(G, [int(v) for v in rng.permutation(G.n_objects)], [int(v) for v in rng.permutation(G.n_arrows)])
    return H


# ---------------------------------------------------------------- functors


def _random_hom(rng, g, h):
    """A homomorphism ``g -> h`` found by sampling generator images (trivial as fallback)."""
    gens = g.generators()
    for _ in range(20):
        images = {s: int(rng.integers(h.order)) for s in gens}
        hom = extend_homomorphism(g, h, images)
        if hom is not None:
            return hom
    return tuple(h.identity for _ in g.elements)


def gen_functor(rng, A=None, B=None, bounds=Bounds(), identity_prob=0.0):
    """A random functor ``A -> B`` built on frames of ``A``.

    Each component of ``A`` picks a root image, tree-arrow images in the
    component of that image, and a vertex-group homomorphism.
    """
    A = A if A is not None else gen_groupoid(rng, bounds)
    B = B if B is not None else gen_groupoid(rng, bounds)
    if A is B and identity_prob and rng.random() < identity_prob:
        return GpdFunctor(A, A, range(A.n_objects), range(A.n_arrows))
    frs = frames(A)
    comp_of = {}
    for block in pi0(B):
        for y in block:
            comp_of[y] = block
    obj, tree, loops = [0] * A.n_objects, {}, {}
    for fr in frs:
        y0 = int(rng.integers(B.n_objects))
        obj[fr.root] = y0
        tree[fr.root] = B.identity[y0]
        for x in fr.objects:
            if x != fr.root:
                y = _pick(rng, comp_of[y0])
                obj[x] = y
                tree[x] = _pick(rng, B.hom(y0, y))
        loops_b = B.hom(y0, y0)
        pos = {f: i for i, f in enumerate(loops_b)}
        table = [[pos[B.mul(g, f)] for f in loops_b] for g in loops_b]
        gb = Group(table, identity=pos[B.identity[y0]])
        hom = _random_hom(rng, fr.group, gb)
        for i, loop in enumerate(fr.vertex):
            loops[loop] = loops_b[hom[i]]
    F = functor_from_frames(A, B, frs, obj, tree, loops)
    return validate_functor(F.obj_map, F.arr_map, A, B)


# ------------------------------------------------------------ distributors


def _random_subgroup(rng, group):
    n_gens = int(rng.integers(0, 3))
    return group.generated([int(rng.integers(group.order)) for _ in range(n_gens)])


def _random_biset(rng, ga, gb, max_size, min_orbits=0):
    """A random ``ga``-``gb`` biset as a union of coset spaces of ``ga × gb``.

    Returns ``(size, left, right)`` with ``left[g][x] = g·x`` and
    ``right[h][x] = x·h``.
    """
    P = direct_product(ga, gb)
    m = gb.order
    orbits = []
    size = 0
    for _ in range(int(rng.integers(min_orbits, max_size + 1)) + 4 * min_orbits):
        if min_orbits and orbits and len(orbits) >= min_orbits and rng.random() < 0.5:
            break
        H = _random_subgroup(rng, P)
        k = P.order // len(H)
        if size + k > max_size:
            continue
        # left cosets pH, named by least member
        cosets, seen = [], {}
        for p in P.elements:
            if p not in seen:
                coset = tuple(sorted(P.mul(p, h) for h in H))
                for q in coset:
                    seen[q] = len(cosets)
                cosets.append(coset)
        orbits.append((cosets, seen))
        size += k
    if len(orbits) < min_orbits and max_size >= 1:
        # the one-point biset, the coset space of the whole group
        orbits.append(([tuple(P.elements)], {p: 0 for p in P.elements}))
        size += 1
    left = [[0] * size for _ in ga.elements]
    right = [[0] * size for _ in gb.elements]
    offset = 0
    for cosets, seen in orbits:
        for i, coset in enumerate(cosets):
            p = coset[0]
            for g in ga.elements:
                left[g][offset + i] = offset + seen[P.mul(g * m + gb.identity, p)]
            for h in gb.elements:
                # x·h is (e, h⁻¹)·x
                right[h][offset + i] = offset + seen[P.mul(ga.identity * m + gb.inv(h), p)]
        offset += len(cosets)
    return size, left, right


def gen_distributor(rng, A=None, B=None, bounds=Bounds()):
    """A random ``S in Dist(A, B)``.

    For each pair of components the fiber at the roots is a random biset of
    the two vertex groups; the other fibers are its transports along tree
    arrows, and arrows act through the vertex groups.
    """
    A = A if A is not None else gen_groupoid(rng, bounds)
    B = B if B is not None else gen_groupoid(rng, bounds)
    fa, fb = frames(A), frames(B)
    root_a = {x: fr for fr in fa for x in fr.objects}
    root_b = {y: fr for fr in fb for y in fr.objects}
    biset = {}
    for i, fra in enumerate(fa):
        for j, frb in enumerate(fb):
            biset[i, j] = _random_biset(rng, fra.group, frb.group, bounds.max_fiber, min_orbits=int(rng.random() < 0.7))
    ia = {id(fr): i for i, fr in enumerate(fa)}
    ib = {id(fr): j for j, fr in enumerate(fb)}

    sizes = {}
    for b in B.objects:
        for a in A.objects:
            n = biset[ia[id(root_a[a])], ib[id(root_b[b])]][0]
            if n:
                sizes[b, a] = n
    S = Distributor(A, B, sizes, {}, {})
    loop_a = {fr.root: {f: k for k, f in enumerate(fr.vertex)} for fr in fa}
    loop_b = {fr.root: {f: k for k, f in enumerate(fr.vertex)} for fr in fb}
    left, right = {}, {}
    for s, (b, a) in enumerate(S.anchor):
        fra, frb = root_a[a], root_b[b]
        _, act_l, act_r = biset[ia[id(fra)], ib[id(frb)]]
        x = S.local_index(s)
        for alpha in A.out_arrows[a]:
            a2 = A.cod[alpha]
            # the loop t_{a2}⁻¹ ∘ alpha ∘ t_a at the root
            loop = A.mul(A.inverse[fra.tree[a2]], A.mul(alpha, fra.tree[a]))
            left[alpha, s] = S.fiber(b, a2)[act_l[loop_a[fra.root][loop]][x]]
        for beta in B.in_arrows[b]:
            b2 = B.dom[beta]
            loop = B.mul(B.inverse[frb.tree[b]], B.mul(beta, frb.tree[b2]))
            right[s, beta] = S.fiber(b2, a)[act_r[loop_b[frb.root][loop]][x]]
    return validate_distributor(A, B, sizes, left, right)


def gen_composable(rng, length=2, bounds=Bounds()):
    """``length`` composable distributors over freshly generated groupoids."""
    gpds = [gen_groupoid(rng, bounds) for _ in range(length + 1)]
    return [gen_distributor(rng, gpds[i], gpds[i + 1], bounds) for i in range(length)]


def gen_span(rng, bounds=Bounds()):
    """A span mixing elements spans of distributors and arbitrary functor pairs."""
    kind = int(rng.integers(3))
    A, B = gen_groupoid(rng, bounds), gen_groupoid(rng, bounds)
    if kind == 0:
        return elements_span(gen_distributor(rng, A, B, bounds))
    if kind == 1:
        sp = elements_span(gen_distributor(rng, A, B, bounds))
        E = sp.apex
        H, phi = relabel(
            E, [int(v) for v in rng.permutation(E.n_objects)], [int(v) for v in rng.permutation(E.n_arrows)]
        )
        inv_obj = [0] * E.n_objects
        for x, y in enumerate(phi.obj_map):
            inv_obj[y] = x
        inv_arr = [0] * E.n_arrows
        for f, g in enumerate(phi.arr_map):
            inv_arr[g] = f
        Q = GpdFunctor(H, A, [sp.left.obj_map[x] for x in inv_obj], [sp.left.arr_map[f] for f in inv_arr])
        P = GpdFunctor(H, B, [sp.right.obj_map[x] for x in inv_obj], [sp.right.arr_map[f] for f in inv_arr])
        return Span(Q, P)
    E = gen_groupoid(rng, bounds)
    return Span(gen_functor(rng, E, A, bounds), gen_functor(rng, E, B, bounds))


# ---------------------------------------------------------------- G-sets


def random_gset(rng, base, max_points, min_points=0):
    """A disjoint union of coset spaces ``G/H`` with at most ``max_points`` points."""
    G = base.group
    orbits = []
    size = 0
    for _ in range(int(rng.integers(1, max_points + 1)) + 4):
        H = _random_subgroup(rng, G)
        k = G.order // len(H)
        if size + k > max_points:
            continue
        orbits.append(H)
        size += k
        if size >= max_points or (size >= min_points and rng.random() < 0.35):
            break
    if not orbits and min_points:
        orbits.append(tuple(G.elements))
        size = 1
    actions = []
    offset = 0
    for H in orbits:
        cosets, seen = [], {}
        for g in G.elements:
            if g not in seen:
                coset = tuple(sorted(G.mul(g, h) for h in H))
                for q in coset:
                    seen[q] = len(cosets)
                cosets.append(coset)
        actions.append([[offset + seen[G.mul(g, c[0])] for c in cosets] for g in G.elements])
        offset += len(cosets)
    table = np.concatenate([np.array(a, dtype=np.int64) for a in actions], axis=1) if actions else None
    X = base.object(0) if table is None else base.object(action=table)
    perm = rng.permutation(X.n)
    inv = np.argsort(perm)
    return base.object(action=perm[X.action[:, inv]]) if X.n else X


def _orbit_reps(X):
    seen, reps = set(), []
    for x in X.points:
        if x not in seen:
            reps.append(x)
            seen.update(int(v) for v in X.action[:, x])
    return reps


def random_equivariant_map(rng, X, Y, surjective=False):
    """A random equivariant ``X -> Y``, or None when no orbit of ``Y`` can receive some orbit of ``X``."""
    base, G = X.base, X.base.group
    values = np.full(X.n, -1, dtype=np.int64)
    for x in _orbit_reps(X):
        stab = [g for g in G.elements if X.action[g, x] == x]
        targets = [y for y in Y.points if all(Y.action[g, y] == y for g in stab)]
        if not targets:
            return None
        y = _pick(rng, targets)
        for g in G.elements:
            values[X.action[g, x]] = Y.action[g, y]
    f = base.morphism(X, Y, values)
    if surjective and not base.is_regular_epi(f):
        return None
    return f


def gen_regular_epi_pair(rng, base, bounds=Bounds()):
    """``(f, g)`` with ``f: X ↠ Z`` surjective and ``g: Y -> Z`` arbitrary."""
    n = bounds.max_carrier
    for _ in range(100):
        Z = random_gset(rng, base, max(1, n // 2), min_points=1)
        extra = random_gset(rng, base, n - Z.n)
        X = base.coproduct(Z, extra)
        h = random_equivariant_map(rng, extra, Z)
        if h is None:
            continue
        f = base.morphism(X, Z, np.concatenate([np.arange(Z.n), h.values]))
        Y = random_gset(rng, base, n)
        g = random_equivariant_map(rng, Y, Z)
        if g is not None:
            return f, g
    raise RuntimeError("could not generate a regular epi pair")


@dataclass(frozen=True)
class BundleGroupoid:
    """``(x, y, k)`` for ``x ~ y`` in ``C0`` and ``k`` in a vertex group with trivial G-action."""

    groupoid: InternalGroupoid
    classes: object
    group: object
    index: dict


def gen_bundle(rng, base, bounds=Bounds(), pool=GROUP_POOL):
    """An internal groupoid ``x -(k)-> y`` over an equivariant equivalence on ``C0``.

    The equivalence is the kernel of a random equivariant map ``p: C0 -> Q``;
    the vertex group acts trivially.  Carriers stay within ``max_carrier``.
    """
    for _ in range(200):
        C0 = random_gset(rng, base, max(1, bounds.max_carrier // 2), min_points=1)
        Q = random_gset(rng, base, C0.n, min_points=1)
        p = random_equivariant_map(rng, C0, Q)
        if p is None:
            continue
        blocks = {}
        for x in C0.points:
            blocks.setdefault(p(x), []).append(x)
        n_pairs = sum(len(b) ** 2 for b in blocks.values())
        options = [g for g in pool if g.order <= bounds.max_group_order and n_pairs * g.order <= bounds.max_carrier]
        if not options:
            continue
        K = _pick(rng, options)
        return _bundle(base, C0, p, K)
    raise RuntimeError("could not generate an internal groupoid")


def _bundle(base, C0, p, K):
    arrows = [(x, y, k) for x in C0.points for y in C0.points if p(x) == p(y) for k in K.elements]
    index = {a: i for i, a in enumerate(arrows)}
    G = base.group
    action = [[index[int(C0.action[g, x]), int(C0.action[g, y]), k] for x, y, k in arrows] for g in G.elements]
    C1 = base.object(action=np.array(action, dtype=np.int64).reshape(G.order, len(arrows)))
    d = [x for x, _, _ in arrows]
    c = [y for _, y, _ in arrows]
    e = [index[x, x, K.identity] for x in C0.points]
    tau = [index[y, x, K.inv(k)] for x, y, k in arrows]
    C2 = base.pullback(base.morphism(C1, C0, d), base.morphism(C1, C0, c))
    m = []
    for g, f in C2.pairs:
        y, z, k2 = arrows[g]
        x, _, k1 = arrows[f]
        m.append(index[x, z, K.mul(k2, k1)])
    C = validate_internal_groupoid(base, C0, C1, d, c, e, m, tau)
    return BundleGroupoid(C, p, K, index)


def gen_internal_groupoid(rng, base, bounds=Bounds(), pool=GROUP_POOL):
    return gen_bundle(rng, base, bounds, pool).groupoid


def gen_internal_functor(rng, base, C=None, D=None, bounds=Bounds()):
    """An internal functor between bundle groupoids, found by rejection on ``F0``.

    ``F1(x, y, k) = (F0 x, F0 y, theta(y) phi(k) theta(x)⁻¹)`` with ``phi`` a
    homomorphism and ``theta`` constant on G-orbits.  Endpoints that are not
    supplied are redrawn until a functor exists; with both supplied the
    result may be None.
    """
    for _ in range(100):
        src = C if C is not None else gen_bundle(rng, base, bounds)
        tgt = D if D is not None else gen_bundle(rng, base, bounds)
        F = _bundle_functor(rng, base, src, tgt)
        if F is not None or (C is not None and D is not None):
            return F
    raise RuntimeError("could not generate an internal functor")


def _bundle_functor(rng, base, C, D):
    X, Y = C.groupoid.C0, D.groupoid.C0
    for _ in range(50):
        F0 = random_equivariant_map(rng, X, Y)
        if F0 is None:
            continue
        ok = all(
            D.classes(F0(x)) == D.classes(F0(y)) for x in X.points for y in X.points if C.classes(x) == C.classes(y)
        )
        if ok:
            break
    else:
        return None
    phi = _random_hom(rng, C.group, D.group)
    theta = {}
    for x in _orbit_reps(X):
        t = int(rng.integers(D.group.order))
        for g in base.group.elements:
            theta[int(X.action[g, x])] = t
    KD = D.group
    F1 = []
    for (x, y, k), _ in sorted(C.index.items(), key=lambda kv: kv[1]):
        kk = KD.mul(theta[y], KD.mul(phi[k], KD.inv(theta[x])))
        F1.append(D.index[F0(x), F0(y), kk])
    return validate_internal_functor(C.groupoid, D.groupoid, F0, F1)


def gen_internal_distributor(rng, base, A, B, bounds=Bounds()):
    """An internal distributor between bundle groupoids.

    Points are ``(a, b, j)`` for ``(p a, p b)`` in a random G-invariant
    relation of class pairs and ``j`` in a biset chosen per G-orbit of that
    relation; G moves ``a`` and ``b`` and fixes ``j``.
    """
    QA = sorted({A.classes(x) for x in A.groupoid.C0.points})
    QB = sorted({B.classes(y) for y in B.groupoid.C0.points})
    qa_obj, qb_obj = A.classes.cod, B.classes.cod
    members_a = {q: [x for x in A.groupoid.C0.points if A.classes(x) == q] for q in QA}
    members_b = {q: [y for y in B.groupoid.C0.points if B.classes(y) == q] for q in QB}
    G = base.group
    pair_orbits, seen = [], set()
    for qa in QA:
        for qb in QB:
            if (qa, qb) not in seen:
                orbit = sorted({(int(qa_obj.action[g, qa]), int(qb_obj.action[g, qb])) for g in G.elements})
                seen.update(orbit)
                pair_orbits.append(orbit)
    pts, tables = [], []
    budget = bounds.max_carrier
    for orbit in pair_orbits:
        if rng.random() < 0.25:
            continue
        n_ab = sum(len(members_a[qa]) * len(members_b[qb]) for qa, qb in orbit)
        max_j = min(bounds.max_fiber, budget // max(n_ab, 1))
        if max_j < 1:
            continue
        size, jl, jr = _random_biset(rng, A.group, B.group, max_j, min_orbits=1)
        t = len(tables)
        tables.append((jl, jr))
        for qa, qb in orbit:
            for a in members_a[qa]:
                for b in members_b[qb]:
                    pts.extend((a, b, t, j) for j in range(size))
        budget -= n_ab * size
    index = {p: i for i, p in enumerate(pts)}
    CA, CB = A.groupoid, B.groupoid
    action = [[index[int(CA.C0.action[g, a]), int(CB.C0.action[g, b]), t, j] for a, b, t, j in pts] for g in G.elements]
    S0 = base.object(action=np.array(action, dtype=np.int64).reshape(G.order, len(pts)))
    L = [a for a, _, _, _ in pts]
    R = [b for _, b, _, _ in pts]
    Lm, Rm = base.morphism(S0, CA.C0, L), base.morphism(S0, CB.C0, R)
    lam_dom, rho_dom = base.pullback(CA.d, Lm), base.pullback(Rm, CB.c)
    arrows_a = {i: a for a, i in A.index.items()}
    arrows_b = {i: b for b, i in B.index.items()}
    lam = []
    for alpha, s in lam_dom.pairs:
        _, a2, k = arrows_a[int(alpha)]
        _, b, t, j = pts[s]
        lam.append(index[a2, b, t, tables[t][0][k][j]])
    rho = []
    for s, beta in rho_dom.pairs:
        b2, _, k = arrows_b[int(beta)]
        a, _, t, j = pts[s]
        rho.append(index[a, b2, t, tables[t][1][k][j]])
    return validate_internal_distributor(CA, CB, S0, Lm, Rm, lam, rho)


def gen_internal_pair(rng, base, bounds=Bounds()):
    """Composable internal distributors ``S in Dist(A, B)``, ``T in Dist(B, C)``."""
    A, B, C = (gen_bundle(rng, base, bounds) for _ in range(3))
    return gen_internal_distributor(rng, base, A, B, bounds), gen_internal_distributor(rng, base, B, C, bounds)
