"""Self-avoiding walks/polygons and the loop gas on the honeycomb lattice.

Walk counts A_N come from exhaustive depth-first search; polygon counts A'_N
identify cyclic shifts and the two traversal orientations (the polygon is an
unoriented geometric object; the CSV header records this convention).

Loop-gas configurations are edge subsets with every vertex degree 0 or 2.
On a cubic graph any face-subset XOR is such a configuration, so plaquette
flips need no validity rejection, and on simply connected patches the face
subsets enumerate the whole configuration space exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .lattice import LatticeDomain, domain_from_keys, lattice_steps
from .unionfind import UnionFind

SAW_LIMITS = {"square": 16, "hexagonal": 24, "triangular": 12}

HEX_CONNECTIVE = np.sqrt(2.0 + np.sqrt(2.0))


def _moves(lattice: str, vertex):
    if lattice in ("square", "triangular"):
        return [(vertex[0] + d[0], vertex[1] + d[1]) for d in lattice_steps(lattice)]
    if lattice == "hexagonal":
        s, i, j = vertex
        if s == 0:
            return [(1, i, j), (1, i - 1, j), (1, i, j - 1)]
        return [(0, i, j), (0, i + 1, j), (0, i, j + 1)]
    raise ValueError(lattice)


def _origin(lattice: str):
    return (0, 0, 0) if lattice == "hexagonal" else (0, 0)


@dataclass
class SawCountTable:
    lattice: str
    walk_counts: list[int]      # A_N for N = 1..n_max
    polygon_counts: list[int]   # A'_N, polygons through the origin

    @property
    def n_max(self) -> int:
        return len(self.walk_counts)

    def check_submultiplicative(self) -> bool:
        a = self.walk_counts
        for n in range(1, len(a) + 1):
            for m in range(1, len(a) - n + 1):
                if a[n + m - 1] > a[n - 1] * a[m - 1]:
                    return False
        return True

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"# lattice={self.lattice}; polygons counted through the "
                        "origin, modulo cyclic shift and reversal (unoriented)"])
            w.writerow(["N", "A_N", "Aprime_N"])
            for n in range(1, self.n_max + 1):
                w.writerow([n, self.walk_counts[n - 1], self.polygon_counts[n - 1]])


def enumerate_saw(lattice: str, n_max: int) -> SawCountTable:
    """Exact A_N by depth-first search, plus closed-walk tallies for A'_N."""
    limit = SAW_LIMITS.get(lattice)
    if limit is None:
        raise ValueError(f"unknown lattice {lattice!r}")
    if n_max > limit:
        raise ValueError(f"n_max={n_max} beyond the enumeration budget for "
                         f"{lattice} (max {limit})")
    origin = _origin(lattice)
    walks = [0] * (n_max + 1)
    closed = [0] * (n_max + 1)
    path = [origin]
    occupied = {origin}

    def dfs(depth):
        last = path[-1]
        for nxt in _moves(lattice, last):
            if nxt == origin and depth >= 3:
                closed[depth] += 1
            if nxt in occupied:
                continue
            walks[depth] += 1
            if depth < n_max:
                occupied.add(nxt)
                path.append(nxt)
                dfs(depth + 1)
                path.pop()
                occupied.remove(nxt)

    dfs(1)
    polygons = [c // 2 for c in closed]  # two orientations per polygon
    return SawCountTable(lattice, walks[1:], polygons[1:])


def enumerate_sap(lattice: str, n_max: int) -> list[int]:
    return enumerate_saw(lattice, n_max).polygon_counts


def sap_mass(loop_length: int, growth: float) -> float:
    """Weight growth**-N of a length-N self-avoiding polygon."""
    if growth <= 1.0:
        raise ValueError("growth constant must exceed 1")
    if loop_length < 3:
        raise ValueError("not a polygon")
    return float(growth ** (-loop_length))


@dataclass
class ConnectiveEstimate:
    root: float        # A_N**(1/N); upper estimate by submultiplicativity
    ratio: float       # A_N / A_{N-1}
    bracket: tuple[float, float]
    n_max: int

    def contains(self, value: float) -> bool:
        return self.bracket[0] <= value <= self.bracket[1]


def estimate_connective_constant(table: SawCountTable) -> ConnectiveEstimate:
    if table.n_max < 8:
        raise ValueError("need counts up to N >= 8")
    a = table.walk_counts
    n = table.n_max
    root = a[n - 1] ** (1.0 / n)
    ratio = a[n - 1] / a[n - 2]
    return ConnectiveEstimate(root, ratio, (min(root, ratio), max(root, ratio)), n)


def nienhuis_theta_c(n: float) -> float:
    """Critical loop fugacity 1/sqrt(2 + sqrt(2 - N)) for N in [0, 2]."""
    if not 0.0 <= n <= 2.0:
        raise ValueError("formula applies for N in [0, 2]")
    return float(1.0 / np.sqrt(2.0 + np.sqrt(2.0 - n)))


# --- loop-gas configurations -------------------------------------------------

def honeycomb_face_block(fx: int, fy: int, delta: float = 1.0) -> LatticeDomain:
    """Honeycomb domain consisting of an fx x fy block of hexagonal faces."""
    keys = set()
    for i in range(fx):
        for j in range(fy):
            keys.update(_face_corners(i, j))
    return domain_from_keys("hexagonal", keys, delta)


def _face_corners(i: int, j: int):
    """Corner keys of the hexagonal face centered at triangular site (i, j),
    in cyclic order."""
    return [(0, i, j), (1, i - 1, j), (0, i - 1, j),
            (1, i - 1, j - 1), (0, i, j - 1), (1, i, j - 1)]


def hexagon_faces(domain: LatticeDomain) -> list[np.ndarray]:
    """Edge-index sets of the complete hexagonal faces inside the domain."""
    if domain.kind != "hexagonal":
        raise ValueError("faces are defined on honeycomb domains")
    edge_index = {(int(a), int(b)): k for k, (a, b) in enumerate(domain.edges())}
    faces = []
    for key in domain.keys:
        if key[0] != 0:
            continue
        _, i, j = key
        corners = _face_corners(i, j)
        try:
            idxs = [domain.index_of(c) for c in corners]
        except KeyError:
            continue
        eidx = []
        complete = True
        for a, b in zip(idxs, idxs[1:] + idxs[:1]):
            e = (min(a, b), max(a, b))
            if e not in edge_index:
                complete = False
                break
            eidx.append(edge_index[e])
        if complete:
            faces.append(np.array(sorted(eidx), dtype=np.int64))
    return faces


@dataclass
class LoopConfig:
    domain: LatticeDomain
    edge_set: np.ndarray  # bool per domain edge

    def __post_init__(self):
        self.edge_set = np.asarray(self.edge_set, dtype=bool)
        if self.edge_set.shape != (len(self.domain.edges()),):
            raise ValueError("one flag per edge required")

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.domain.n_sites, dtype=np.int64)
        for a, b in self.domain.edges()[self.edge_set]:
            deg[a] += 1
            deg[b] += 1
        return deg

    def is_valid(self) -> bool:
        return bool(np.all(np.isin(self.degrees(), (0, 2))))

    def loop_count(self) -> int:
        uf = UnionFind(self.domain.n_sites)
        touched = set()
        for a, b in self.domain.edges()[self.edge_set]:
            uf.union(int(a), int(b))
            touched.update((int(a), int(b)))
        return len({uf.find(s) for s in touched})

    def total_length(self) -> int:
        return int(self.edge_set.sum())

    def extract_cycles(self) -> list[list[int]]:
        """Site-index cycles of the selected edges (each vertex has degree 2)."""
        nbrs: dict[int, list[int]] = {}
        for a, b in self.domain.edges()[self.edge_set]:
            nbrs.setdefault(int(a), []).append(int(b))
            nbrs.setdefault(int(b), []).append(int(a))
        cycles = []
        seen = set()
        for start in sorted(nbrs):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            prev, cur = None, start
            while True:
                nxt = [v for v in nbrs[cur] if v != prev]
                nxt = nxt[0] if nxt else prev
                if nxt == start:
                    break
                cyc.append(nxt)
                seen.add(nxt)
                prev, cur = cur, nxt
            cycles.append(cyc)
        return cycles


def on_weight(config: LoopConfig, n: float, theta: float) -> float:
    """Loop-gas weight N^loops * theta^length."""
    if n <= 0:
        raise ValueError("need N > 0")
    if not config.is_valid():
        raise ValueError("edge set is not a disjoint union of loops")
    return float(n ** config.loop_count() * theta ** config.total_length())


def _face_subset_config(domain, faces, bits) -> np.ndarray:
    edge_set = np.zeros(len(domain.edges()), dtype=bool)
    for face, on in zip(faces, bits):
        if on:
            edge_set[face] ^= True
    return edge_set


def exact_on_partition(domain: LatticeDomain, n: float, theta: float) -> float:
    """Exact Z by enumerating all loop configurations (face-subset XORs).

    Requires the interior faces to span the cycle space, i.e. a simply
    connected patch; this is verified via the Euler relation.
    """
    faces = hexagon_faces(domain)
    edges = domain.edges()
    uf = UnionFind(domain.n_sites)
    for a, b in edges:
        uf.union(int(a), int(b))
    cycle_rank = len(edges) - domain.n_sites + uf.n_components
    if len(faces) != cycle_rank:
        raise ValueError("faces do not span the cycle space; patch not simply connected")
    if len(faces) > 22:
        raise ValueError("too many faces for exhaustive enumeration")
    z = 0.0
    for bits in range(2 ** len(faces)):
        edge_set = _face_subset_config(domain, faces,
                                       [(bits >> k) & 1 for k in range(len(faces))])
        cfg = LoopConfig(domain, edge_set)
        z += n ** cfg.loop_count() * theta ** cfg.total_length()
    return float(z)


class PlaquetteChain:
    """Metropolis chain on face toggles for the loop-gas measure."""

    def __init__(self, domain: LatticeDomain, n: float, theta: float, rng):
        if not 0.0 < theta < 1.0:
            raise ValueError("theta must lie in (0,1)")
        if n <= 0:
            raise ValueError("need N > 0")
        self.domain = domain
        self.n = n
        self.theta = theta
        self.faces = hexagon_faces(domain)
        if not self.faces:
            raise ValueError("domain contains no complete face")
        self.gen = rng.generator if hasattr(rng, "generator") else rng
        self.config = LoopConfig(domain, np.zeros(len(domain.edges()), dtype=bool))
        self._l = 0
        self._L = 0

    def step(self):
        face = self.faces[self.gen.integers(len(self.faces))]
        new_edges = self.config.edge_set.copy()
        new_edges[face] ^= True
        cand = LoopConfig(self.domain, new_edges)
        l2, L2 = cand.loop_count(), cand.total_length()
        ratio = (self.n ** (l2 - self._l)) * (self.theta ** (L2 - self._L))
        if ratio >= 1.0 or self.gen.random() < ratio:
            self.config = cand
            self._l, self._L = l2, L2

    def run(self, sweeps: int):
        for _ in range(sweeps):
            for _ in range(len(self.faces)):
                self.step()
        return self


def sample_on_model(domain: LatticeDomain, n: float, theta: float,
                    sweeps: int, rng) -> LoopConfig:
    return PlaquetteChain(domain, n, theta, rng).run(sweeps).config


def plaquette_transition_matrix(domain: LatticeDomain, n: float, theta: float):
    """Exact kernel of the plaquette chain over face subsets (small patches)."""
    faces = hexagon_faces(domain)
    nf = len(faces)
    states = []
    weights = []
    for bits in range(2 ** nf):
        edge_set = _face_subset_config(domain, faces,
                                       [(bits >> k) & 1 for k in range(nf)])
        cfg = LoopConfig(domain, edge_set)
        states.append(cfg)
        weights.append(n ** cfg.loop_count() * theta ** cfg.total_length())
    P = np.zeros((2 ** nf, 2 ** nf))
    for s in range(2 ** nf):
        for k in range(nf):
            t = s ^ (1 << k)
            acc = min(1.0, weights[t] / weights[s])
            P[s, t] += acc / nf
        P[s, s] += 1.0 - P[s].sum()
    pi = np.array(weights) / sum(weights)
    return states, pi, P
