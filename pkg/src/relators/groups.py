"""Finite groups given by multiplication tables."""

from itertools import permutations, product as iproduct

from .errors import NotAGroup


class Group:
    """A finite group on ``range(order)``; ``table[a][b]`` is ``a*b``.

    The table is checked once at construction (closure, identity,
    associativity, inverses).
    """

    def __init__(self, table, identity=0, name=None):
        table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise NotAGroup("multiplication table must be square and non-empty")
        if not 0 <= identity < n:
            raise NotAGroup("identity out of range", identity=identity)
        for a in range(n):
            for b in range(n):
                if not 0 <= table[a][b] < n:
                    raise NotAGroup("product out of range", a=a, b=b)
        for a in range(n):
            if table[identity][a] != a or table[a][identity] != a:
                raise NotAGroup("identity is not a unit", a=a)
        for a, b, c in iproduct(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise NotAGroup("not associative", a=a, b=b, c=c)
        inverse = []
        for a in range(n):
            inv = [b for b in range(n) if table[a][b] == identity]
            if not inv or table[inv[0]][a] != identity:
                raise NotAGroup("element has no inverse", a=a)
            inverse.append(inv[0])
        self.table = table
        self.identity = identity
        self.inverse = tuple(inverse)
        self.name = name or f"G{n}"

    @property
    def order(self):
        return len(self.table)

    @property
    def elements(self):
        return range(len(self.table))

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverse[a]

    def generated(self, gens):
        """The subgroup generated by ``gens`` as a sorted tuple."""
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return tuple(sorted(seen))

    def generators(self):
        """A small generating set, chosen greedily by index."""
        gens = []
        span = {self.identity}
        for a in self.elements:
            if a not in span:
                gens.append(a)
                span = set(self.generated(gens))
        return tuple(gens)

    def is_abelian(self):
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.elements for b in self.elements)

    def to_json(self):
        return {"order": self.order, "table": [list(r) for r in self.table], "identity": self.identity}

    def __eq__(self, other):
        return isinstance(other, Group) and self.table == other.table and self.identity == other.identity

    def __hash__(self):
        return hash((self.table, self.identity))

    def __repr__(self):
        return f"Group({self.name}, order={self.order})"


def cyclic(n):
    return Group([[(a + b) % n for b in range(n)] for a in range(n)], name=f"Z{n}")


def trivial_group():
    return Group([[0]], name="1")


def direct_product(g, h, name=None):
    m = h.order
    table = [
        [g.mul(a // m, b // m) * m + h.mul(a % m, b % m) for b in range(g.order * m)]
        for a in range(g.order * m)
    ]
    return Group(table, identity=g.identity * m + h.identity, name=name or f"{g.name}x{h.name}")


def klein_four():
    return direct_product(cyclic(2), cyclic(2), name="Z2xZ2")


def symmetric(n):
    perms = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(i) = p(q(i))
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return Group(table, identity=index[tuple(range(n))], name=f"S{n}")


def homomorphisms(g, h):
    """Every group homomorphism g -> h, as tuples of images."""
    gens = g.generators()
    out = []
    for images in iproduct(h.elements, repeat=len(gens)):
        hom = extend_homomorphism(g, h, dict(zip(gens, images)))
        if hom is not None:
            out.append(hom)
    return out


def extend_homomorphism(g, h, on_generators):
    """Extend an assignment on generators to a homomorphism, or None.

    Visits every (element, generator) edge of the Cayley graph, which is
    enough to certify the result is multiplicative.
    """
    image = {g.identity: h.identity}
    frontier = [g.identity]
    gens = list(on_generators)
    while frontier:
        x = frontier.pop()
        for s in gens:
            y = g.mul(x, s)
            v = h.mul(image[x], on_generators[s])
            if y in image:
                if image[y] != v:
                    return None
            else:
                image[y] = v
                frontier.append(y)
    if len(image) != g.order:
        return None
    return tuple(image[a] for a in g.elements)


BUILTIN_GROUPS = {
    "1": trivial_group,
    "z2": lambda: cyclic(2),
    "z3": lambda: cyclic(3),
    "z4": lambda: cyclic(4),
    "klein": klein_four,
    "s3": lambda: symmetric(3),
}
