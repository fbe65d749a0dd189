"""Finite Barr-exact base categories: finite sets and finite G-sets.

Both instances share one implementation: a finite set is a G-set for the
trivial group, and the instance tag keeps them apart.  Objects carry an
action table ``action[g, x] = g·x``; morphisms carry their point map as a
numpy array.  Every construction is canonical (pairs in lexicographic
order, quotients numbered by least representative), so "the pullback" is a
function and equations between induced maps hold on the nose.
"""

import numpy as np

from .errors import EquationFailed, InstanceMismatch, NotEquivariant, PreconditionViolated
from .groups import BUILTIN_GROUPS, Group, trivial_group
from .unionfind import UnionFind


class BaseObject:
    """A finite G-set on ``range(n)``."""

    def __init__(self, base, action):
        self.base = base
        self.action = action
        self.action.flags.writeable = False

    @property
    def n(self):
        return self.action.shape[1]

    @property
    def points(self):
        return range(self.n)

    def act(self, g, x):
        return int(self.action[g, x])

    def __eq__(self, other):
        return (
            isinstance(other, BaseObject)
            and self.base == other.base
            and np.array_equal(self.action, other.action)
        )

    def __hash__(self):
        return hash((self.base, self.action.tobytes(), self.action.shape))

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"BaseObject({self.base.name}, {self.n} points)"


class BaseMorphism:
    """An equivariant map ``dom -> cod``; ``values[x]`` is the image of ``x``."""

    def __init__(self, dom, cod, values):
        self.dom = dom
        self.cod = cod
        self.values = values
        self.values.flags.writeable = False

    def __call__(self, x):
        return int(self.values[x])

    def then(self, other):
        """``other ∘ self``."""
        return self.dom.base.compose(other, self)

    def __eq__(self, other):
        return (
            isinstance(other, BaseMorphism)
            and self.dom == other.dom
            and self.cod == other.cod
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self):
        return f"BaseMorphism({self.dom.n} -> {self.cod.n})"


class Pullback:
    """``{(x, y) | f(x) == g(y)}`` in lexicographic order with projections.

    The index of ``(x, y)`` is ``offset[x] + rank[y]``: pairs are grouped by
    ``x`` and, inside a group, ordered by ``y``.
    """

    def __init__(self, f, g, obj, p1, p2, pairs, offset, rank):
        self.f, self.g = f, g
        self.obj, self.p1, self.p2 = obj, p1, p2
        self.pairs = pairs
        self.offset, self.rank = offset, rank

    def index(self, x, y):
        if self.f.values[x] != self.g.values[y]:
            raise KeyError((x, y))
        return int(self.offset[x] + self.rank[y])

    def get(self, x, y, default=None):
        if self.f.values[x] != self.g.values[y]:
            return default
        return int(self.offset[x] + self.rank[y])

    def indices(self, xs, ys):
        """Vectorized :meth:`index` for pairs already known to lie in the pullback."""
        return self.offset[xs] + self.rank[ys]

    def mediate(self, h, k):
        """The unique ``W -> P`` with ``p1∘u == h`` and ``p2∘u == k``."""
        if h.dom != k.dom or h.cod != self.f.dom or k.cod != self.g.dom:
            raise PreconditionViolated("cone legs do not match the pullback")
        bad = np.flatnonzero(self.f.values[h.values] != self.g.values[k.values])
        if len(bad):
            raise PreconditionViolated("cone does not commute", point=int(bad[0]))
        values = self.indices(h.values, k.values)
        return self.obj.base.morphism(h.dom, self.obj, values)

    def __iter__(self):
        return iter((self.obj, self.p1, self.p2))


class Coequalizer:
    """``Y / (f(x) ~ g(x))`` with blocks numbered by least member."""

    def __init__(self, f, g, obj, q):
        self.f, self.g = f, g
        self.obj, self.q = obj, q

    def descend(self, h):
        """The unique ``Q -> Z`` with ``u∘q == h`` for ``h`` coequalizing the pair."""
        if h.dom != self.q.dom:
            raise PreconditionViolated("map does not start at the coequalized object")
        values = [None] * self.obj.n
        for y in h.dom.points:
            b = self.q(y)
            if values[b] is None:
                values[b] = h(y)
            elif values[b] != h(y):
                raise PreconditionViolated("map does not coequalize the pair", point=y)
        return self.obj.base.morphism(self.obj, h.cod, values)

    def __iter__(self):
        return iter((self.obj, self.q))


class Base:
    """Finite G-sets for ``group``; finite sets when ``group`` is None."""

    def __init__(self, group=None, name=None):
        self.is_gset = group is not None
        self.group = group if group is not None else trivial_group()
        self.name = name or (f"gset:{self.group.name}" if self.is_gset else "finset")
        self._mul = np.array(self.group.table, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, Base) and self.is_gset == other.is_gset and self.group == other.group

    def __hash__(self):
        return hash((self.is_gset, self.group))

    def __repr__(self):
        return f"Base({self.name})"

    # ------------------------------------------------------------ objects

    def object(self, n=None, action=None):
        """A G-set from an action table (rows indexed by group elements).

        With ``action`` omitted the action on ``range(n)`` is trivial.
        """
        G = self.group
        if action is None:
            action = np.tile(np.arange(n, dtype=np.int64), (G.order, 1))
        else:
            action = np.array(action, dtype=np.int64).reshape(G.order, -1)
        n = action.shape[1]
        if n and (action.min() < 0 or action.max() >= n):
            raise PreconditionViolated("action table out of range")
        if not np.array_equal(action[G.identity], np.arange(n)):
            raise EquationFailed("identity_acts_trivially", "identity does not act trivially")
        for g in G.elements:
            for h in G.elements:
                if not np.array_equal(action[G.mul(g, h)], action[g][action[h]]):
                    raise EquationFailed("action_composition", f"(gh)·x != g·(h·x)", g=g, h=h)
        return BaseObject(self, action)

    def regular(self):
        """``G`` acting on itself by left multiplication."""
        return BaseObject(self, self._mul.copy())

    def empty(self):
        return BaseObject(self, np.zeros((self.group.order, 0), dtype=np.int64))

    def terminal(self):
        return BaseObject(self, np.zeros((self.group.order, 1), dtype=np.int64))

    def coproduct(self, X, Y):
        self._same(X, Y)
        return BaseObject(self, np.concatenate([X.action, Y.action + X.n], axis=1))

    def _same(self, *things):
        for t in things:
            if t.base != self:
                raise InstanceMismatch(f"{t!r} does not live in {self.name}")

    # ---------------------------------------------------------- morphisms

    def morphism(self, dom, cod, values):
        """An equivariant map; equivariance is checked on every point."""
        self._same(dom, cod)
        values = np.asarray(values, dtype=np.int64).reshape(-1)
        if len(values) != dom.n:
            raise PreconditionViolated(f"map has {len(values)} values for {dom.n} points")
        if dom.n and (values.min() < 0 or values.max() >= cod.n):
            raise PreconditionViolated("map values out of range")
        bad = np.argwhere(values[dom.action] != cod.action[:, values])
        if len(bad):
            g, x = (int(v) for v in bad[0])
            raise NotEquivariant(f"f({g}·{x}) != {g}·f({x})", g=g, x=x)
        return BaseMorphism(dom, cod, values)

    def identity(self, X):
        return BaseMorphism(X, X, np.arange(X.n, dtype=np.int64))

    def compose(self, g, f):
        """``g ∘ f``."""
        if f.cod != g.dom:
            raise PreconditionViolated("maps are not composable")
        return BaseMorphism(f.dom, g.cod, g.values[f.values])

    def to_terminal(self, X):
        return BaseMorphism(X, self.terminal(), np.zeros(X.n, dtype=np.int64))

    def is_mono(self, f):
        return len(np.unique(f.values)) == f.dom.n

    def is_regular_epi(self, f):
        """Coequalizers in (G-)sets are exactly the surjections."""
        return len(np.unique(f.values)) == f.cod.n

    def is_iso(self, f):
        return f.dom.n == f.cod.n and self.is_mono(f)

    # ------------------------------------------------------------- limits

    def pullback(self, f, g):
        if f.cod != g.cod:
            self._same(f.cod, g.cod)
            raise PreconditionViolated("pullback of maps with different codomains")
        X, Y = f.dom, g.dom
        fv, gv = f.values, g.values
        order = np.argsort(gv, kind="stable")
        starts = np.searchsorted(gv[order], np.arange(f.cod.n + 1))
        rank = np.empty(Y.n, dtype=np.int64)
        rank[order] = np.arange(Y.n) - starts[gv[order]]
        counts = starts[fv + 1] - starts[fv]
        offset = np.cumsum(counts) - counts
        total = int(counts.sum())
        xs = np.repeat(np.arange(X.n, dtype=np.int64), counts)
        pos = np.arange(total) - np.repeat(offset, counts) + np.repeat(starts[fv], counts)
        ys = order[pos] if total else np.zeros(0, dtype=np.int64)
        pairs = np.stack([xs, ys], axis=1).reshape(-1, 2).astype(np.int64)
        action = (offset[X.action[:, xs]] + rank[Y.action[:, ys]]).astype(np.int64).reshape(self.group.order, total)
        P = BaseObject(self, action)
        p1 = BaseMorphism(P, X, pairs[:, 0].copy())
        p2 = BaseMorphism(P, Y, pairs[:, 1].copy())
        return Pullback(f, g, P, p1, p2, pairs, offset, rank)

    def product(self, X, Y):
        return self.pullback(self.to_terminal(X), self.to_terminal(Y))

    def kernel_pair(self, f):
        return self.pullback(f, f)

    def equalizer(self, f, g):
        """``{x | f(x) == g(x)}`` with its inclusion."""
        if f.dom != g.dom or f.cod != g.cod:
            raise PreconditionViolated("equalizer of non-parallel maps")
        keep = np.flatnonzero(f.values == g.values)
        pos = {int(x): i for i, x in enumerate(keep)}
        action = np.array(
            [[pos[int(f.dom.action[h, x])] for x in keep] for h in self.group.elements], dtype=np.int64
        ).reshape(self.group.order, len(keep))
        E = BaseObject(self, action)
        return E, BaseMorphism(E, f.dom, keep.astype(np.int64))

    # ----------------------------------------------------------- colimits

    def coequalizer(self, f, g):
        if f.dom != g.dom or f.cod != g.cod:
            self._same(f.dom, g.dom)
            raise PreconditionViolated("coequalizer of non-parallel maps")
        Y = f.cod
        uf = UnionFind(Y.n)
        for a, b in zip(f.values, g.values):
            uf.union(int(a), int(b))
        labels = np.array(uf.labels(), dtype=np.int64)
        k = int(labels.max()) + 1 if Y.n else 0
        rep = np.zeros(k, dtype=np.int64)
        for y in range(Y.n - 1, -1, -1):
            rep[labels[y]] = y
        action = labels[Y.action[:, rep]] if k else np.zeros((self.group.order, 0), dtype=np.int64)
        # the relation generated by equivariant maps is equivariant, so the action descends
        if not np.array_equal(labels[Y.action], action[:, labels]):
            raise EquationFailed("action_descends", "action does not descend to the quotient")
        Q = BaseObject(self, action)
        return Coequalizer(f, g, Q, BaseMorphism(Y, Q, labels))

    def image_factorization(self, f):
        """``f == m ∘ e`` with ``e`` surjective and ``m`` injective; returns ``(I, e, m)``."""
        image = np.unique(f.values)
        pos = np.full(f.cod.n, -1, dtype=np.int64)
        pos[image] = np.arange(len(image))
        action = pos[f.cod.action[:, image]]
        I = BaseObject(self, action.reshape(self.group.order, len(image)))
        return I, BaseMorphism(f.dom, I, pos[f.values]), BaseMorphism(I, f.cod, image.astype(np.int64))

    def factor_through_epi(self, e, h, name="well_defined"):
        """The unique ``u`` with ``u ∘ e == h`` for a surjection ``e``.

        Raises :class:`EquationFailed` when ``h`` is not constant on the
        fibers of ``e``.
        """
        if e.dom != h.dom or not self.is_regular_epi(e):
            raise PreconditionViolated("factoring requires a surjection out of the same object")
        values = np.full(e.cod.n, -1, dtype=np.int64)
        values[e.values] = h.values
        bad = np.flatnonzero(values[e.values] != h.values)
        if len(bad):
            raise EquationFailed(name, "map is not constant on the fibers", point=int(bad[0]))
        return self.morphism(e.cod, h.cod, values)

    def quotient_by_kernel_pair(self, f):
        """The coequalizer of the kernel pair of ``f`` (equals its image when ``f`` is regular)."""
        kp = self.kernel_pair(f)
        return self.coequalizer(kp.p1, kp.p2)

    # ---------------------------------------------------------- relations

    def relative_relation_compose(self, r1, r2):
        """Compose relations ``(R1 -> A, R1 -> B)`` and ``(R2 -> B, R2 -> C)``.

        Pullback over ``B`` then image of the induced map into ``A × C``.
        Returns ``(I, to_a, to_c)``; the legs are jointly monic.
        """
        f1, g1 = r1
        f2, g2 = r2
        pb = self.pullback(g1, f2)
        A, C = f1.cod, g2.cod
        prod = self.product(A, C)
        into = prod.mediate(self.compose(f1, pb.p1), self.compose(g2, pb.p2))
        I, _, m = self.image_factorization(into)
        return I, self.compose(prod.p1, m), self.compose(prod.p2, m)


FINSET = Base()


def gset_base(key):
    """``"z2"``, ``"z3"``, ``"s3"``... or a :class:`Group`."""
    group = key if isinstance(key, Group) else BUILTIN_GROUPS[key]()
    return Base(group)


def parse_base(selector):
    """``finset`` or ``gset:<name>`` as used on the command line."""
    if selector == "finset":
        return Base()
    kind, _, name = selector.partition(":")
    if kind != "gset" or name not in BUILTIN_GROUPS:
        raise PreconditionViolated(f"unknown base {selector!r}")
    return gset_base(name)
