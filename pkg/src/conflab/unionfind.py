"""Union-find with path compression and union by size."""

from __future__ import annotations

import numpy as np


class UnionFind:
    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)
        self.n_components = n

    def find(self, x: int) -> int:
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return int(root)

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.n_components -= 1
        return True

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def components(self, members=None):
        """Group members (default: all elements) by root.

        Components are returned sorted by their smallest member, each sorted
        internally, so labeling is deterministic.
        """
        if members is None:
            members = range(len(self.parent))
        buckets: dict[int, list[int]] = {}
        for x in members:
            buckets.setdefault(self.find(int(x)), []).append(int(x))
        comps = [sorted(v) for v in buckets.values()]
        comps.sort(key=lambda c: c[0])
        return comps
