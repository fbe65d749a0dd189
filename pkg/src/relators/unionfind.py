class UnionFind:
    """Disjoint sets over ``range(n)`` with path halving and union by size."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n
        self.n_blocks = n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]
        self.n_blocks -= 1
        return True

    def labels(self):
        """Block label per element; blocks numbered by their least member."""
        out = [-1] * len(self.parent)
        seen = {}
        for x in range(len(self.parent)):
            r = self.find(x)
            if r not in seen:
                seen[r] = len(seen)
            out[x] = seen[r]
        return out

    def blocks(self):
        """Blocks as sorted tuples, ordered by least member."""
        labels = self.labels()
        out = [[] for _ in range(max(labels, default=-1) + 1)]
        for x, b in enumerate(labels):
            out[b].append(x)
        return tuple(tuple(b) for b in out)


def quotient_labels(n, pairs):
    """Labels of the equivalence on ``range(n)`` generated by ``pairs``."""
    uf = UnionFind(n)
    for x, y in pairs:
        uf.union(x, y)
    return uf.labels()
