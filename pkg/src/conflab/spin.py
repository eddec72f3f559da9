"""Potts/Ising spins, the random-cluster (FK) model and their coupling.

Everything statistical here is checkable against exhaustive enumeration on
small graphs, and the test suite leans on that: exact partition functions,
exact cluster-coloring marginals, exact transition matrices.  Samplers are
cluster chains (Swendsen-Wang through the bond/color coupling) plus a
single-site heat-bath chain as an independent cross-check, and Wilson's
loop-erased-walk algorithm for uniform spanning trees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import stats
from .clusters import BondConfig
from .unionfind import UnionFind

MAX_EXACT_STATES = 2**24


# --- graphs ------------------------------------------------------------------

@dataclass
class SiteGraph:
    n_sites: int
    edge_array: np.ndarray                  # (m, 2), a < b
    boundary: np.ndarray = field(default_factory=lambda: np.array([], dtype=np.int64))

    def __post_init__(self):
        self.edge_array = np.asarray(self.edge_array, dtype=np.int64).reshape(-1, 2)
        self.boundary = np.asarray(self.boundary, dtype=np.int64)
        self._neighbors = [[] for _ in range(self.n_sites)]
        for a, b in self.edge_array:
            self._neighbors[a].append(int(b))
            self._neighbors[b].append(int(a))
        self._neighbors = [np.array(sorted(v), dtype=np.int64) for v in self._neighbors]

    def edges(self) -> np.ndarray:
        return self.edge_array

    @property
    def neighbor_lists(self):
        return self._neighbors

    def is_connected(self) -> bool:
        uf = UnionFind(self.n_sites)
        for a, b in self.edge_array:
            uf.union(int(a), int(b))
        return uf.n_components == 1


def grid_graph(nx: int, ny: int) -> SiteGraph:
    """nx x ny square grid; boundary = perimeter sites."""
    def idx(i, j):
        return j * nx + i
    edges = []
    for j in range(ny):
        for i in range(nx):
            if i + 1 < nx:
                edges.append((idx(i, j), idx(i + 1, j)))
            if j + 1 < ny:
                edges.append((idx(i, j), idx(i, j + 1)))
    boundary = [idx(i, j) for j in range(ny) for i in range(nx)
                if i in (0, nx - 1) or j in (0, ny - 1)]
    return SiteGraph(nx * ny, np.array(sorted(edges)), np.array(sorted(set(boundary))))


def path_graph(n: int) -> SiteGraph:
    return SiteGraph(n, np.array([(k, k + 1) for k in range(n - 1)]),
                     np.array([0, n - 1]))


def cycle_graph(n: int) -> SiteGraph:
    edges = sorted([(k, (k + 1) % n) if k + 1 < n else (0, n - 1) for k in range(n)])
    return SiteGraph(n, np.array(edges))


def from_domain(domain) -> SiteGraph:
    return SiteGraph(domain.n_sites, domain.edges(), domain.boundary_sites)


def merge_boundary(graph: SiteGraph):
    """Wired version: all boundary sites identified into one vertex.

    Returns (wired graph, site_map old->new).  Multi-edges collapse.
    """
    if graph.boundary.size == 0:
        raise ValueError("graph has no boundary to wire")
    bset = set(int(s) for s in graph.boundary)
    site_map = {}
    nxt = 1
    for s in range(graph.n_sites):
        if s in bset:
            site_map[s] = 0
        else:
            site_map[s] = nxt
            nxt += 1
    edges = set()
    for a, b in graph.edge_array:
        na, nb = site_map[int(a)], site_map[int(b)]
        if na != nb:
            edges.add((min(na, nb), max(na, nb)))
    return SiteGraph(nxt, np.array(sorted(edges)), np.array([0])), site_map


# --- boundary conditions -----------------------------------------------------

@dataclass(frozen=True)
class Free:
    pass


@dataclass(frozen=True)
class FixedColor:
    color: int


@dataclass(frozen=True)
class TwoArc:
    color_a: int
    color_b: int

    def split(self, graph: SiteGraph):
        b = graph.boundary
        half = len(b) // 2
        return b[:half], b[half:]


def fixed_sites(graph: SiteGraph, boundary) -> dict[int, int]:
    if boundary is None or isinstance(boundary, Free):
        return {}
    if isinstance(boundary, FixedColor):
        return {int(s): boundary.color for s in graph.boundary}
    if isinstance(boundary, TwoArc):
        arc_a, arc_b = boundary.split(graph)
        out = {int(s): boundary.color_a for s in arc_a}
        out.update({int(s): boundary.color_b for s in arc_b})
        return out
    raise TypeError(f"unknown boundary condition {boundary!r}")


@dataclass
class SpinConfig:
    graph: SiteGraph
    spins: np.ndarray           # ints in 1..q
    q: int
    boundary_condition: object = None

    def __post_init__(self):
        self.spins = np.asarray(self.spins, dtype=np.int64)
        if self.spins.min(initial=1) < 1 or self.spins.max(initial=1) > self.q:
            raise ValueError("spins must lie in 1..q")
        for s, c in fixed_sites(self.graph, self.boundary_condition).items():
            if self.spins[s] != c:
                raise ValueError("fixed boundary site carries the wrong color")


# --- energies and weights ----------------------------------------------------

def hamiltonian(config: SpinConfig) -> int:
    """Number of disagreeing neighbor pairs."""
    e = config.graph.edge_array
    return int(np.count_nonzero(config.spins[e[:, 0]] != config.spins[e[:, 1]]))


def boltzmann_weight(config: SpinConfig, beta: float) -> float:
    if beta < 0:
        raise ValueError("beta must be >= 0")
    return float(np.exp(-beta * hamiltonian(config)))


def beta_to_p(beta: float) -> float:
    return 1.0 - float(np.exp(-beta))


def p_to_beta(p: float) -> float:
    return float(-np.log(1.0 - p))


def fk_weight(config: BondConfig) -> float:
    """Unnormalized random-cluster weight p^o (1-p)^c q^k."""
    o = int(np.count_nonzero(config.open_edges))
    c = len(config.open_edges) - o
    g = config.graph
    uf = UnionFind(g.n_sites)
    for a, b in g.edges()[config.open_edges]:
        uf.union(int(a), int(b))
    k = uf.n_components
    return (config.p**o) * ((1.0 - config.p)**c) * (config.q**k)


# --- exact enumeration -------------------------------------------------------

def _spin_states(graph: SiteGraph, q: int, boundary=None):
    fixed = fixed_sites(graph, boundary)
    free = [s for s in range(graph.n_sites) if s not in fixed]
    if q ** len(free) > MAX_EXACT_STATES:
        raise ValueError("state space exceeds the exact-enumeration budget")
    base = np.ones(graph.n_sites, dtype=np.int64)
    for s, c in fixed.items():
        base[s] = c
    for combo in product(range(1, q + 1), repeat=len(free)):
        spins = base.copy()
        spins[free] = combo
        yield spins


def potts_partition(graph: SiteGraph, q: int, beta: float, boundary=None):
    """Exhaustive Z and the full Boltzmann distribution {spin tuple: prob}."""
    weights = {}
    e = graph.edge_array
    for spins in _spin_states(graph, q, boundary):
        h = int(np.count_nonzero(spins[e[:, 0]] != spins[e[:, 1]]))
        weights[tuple(spins)] = np.exp(-beta * h)
    z = float(sum(weights.values()))
    return z, {s: w / z for s, w in weights.items()}


def fk_partition(graph: SiteGraph, p: float, q: float):
    """Exhaustive Z and distribution over bond configurations {bond tuple: prob}."""
    m = len(graph.edge_array)
    if 2**m > MAX_EXACT_STATES:
        raise ValueError("state space exceeds the exact-enumeration budget")
    weights = {}
    for bits in product((False, True), repeat=m):
        cfg = BondConfig(graph, np.array(bits, dtype=bool), p=p, q=q)
        weights[bits] = fk_weight(cfg)
    z = float(sum(weights.values()))
    return z, {b: w / z for b, w in weights.items()}


def exact_partition(graph: SiteGraph, model: tuple, boundary=None):
    """model = ('potts', q, beta) or ('fk', p, q); returns (Z, distribution)."""
    kind = model[0]
    if kind == "potts":
        _, q, beta = model
        return potts_partition(graph, q, beta, boundary)
    if kind == "fk":
        _, p, q = model
        return fk_partition(graph, p, q)
    raise ValueError(f"unknown model {model!r}")


def fk_connection_probability(graph: SiteGraph, p: float, q: float,
                              x: int, y: int) -> float:
    """Exact P(x <-> y) under the random-cluster measure."""
    _, dist = fk_partition(graph, p, q)
    tot = 0.0
    for bits, prob in dist.items():
        uf = UnionFind(graph.n_sites)
        for (a, b) in graph.edge_array[np.array(bits, dtype=bool)]:
            uf.union(int(a), int(b))
        if uf.connected(x, y):
            tot += prob
    return tot


def es_spin_distribution(graph: SiteGraph, p: float, q: int):
    """Spin marginal of the bond-then-uniform-coloring construction.

    Every bond configuration contributes its weight spread uniformly over the
    q^k colorings constant on its clusters.
    """
    m = len(graph.edge_array)
    if 2**m > MAX_EXACT_STATES:
        raise ValueError("too many bond configurations")
    out: dict[tuple, float] = {}
    ztot = 0.0
    for bits in product((False, True), repeat=m):
        arr = np.array(bits, dtype=bool)
        o = int(arr.sum())
        w = (p**o) * ((1 - p)**(m - o))
        uf = UnionFind(graph.n_sites)
        for (a, b) in graph.edge_array[arr]:
            uf.union(int(a), int(b))
        comps = uf.components()
        k = len(comps)
        ztot += w * (q**k)
        share = w  # weight p^o (1-p)^c q^k split over q^k colorings
        for colors in product(range(1, q + 1), repeat=k):
            spins = np.empty(graph.n_sites, dtype=np.int64)
            for comp, c in zip(comps, colors):
                spins[comp] = c
            key = tuple(spins)
            out[key] = out.get(key, 0.0) + share
    return {s: w / ztot for s, w in out.items()}


def correlation_identity_check(graph: SiteGraph, p: float, q: int,
                               x: int, y: int):
    """F(x,y) from the coupled spin marginal vs (1 - 1/q) P(x<->y), exactly."""
    if x == y:
        val = 1.0 - 1.0 / q
        return val, val, True
    dist = es_spin_distribution(graph, p, q)
    agree = sum(prob for spins, prob in dist.items() if spins[x] == spins[y])
    lhs = agree - 1.0 / q
    rhs = (1.0 - 1.0 / q) * fk_connection_probability(graph, p, q, x, y)
    return lhs, rhs, abs(lhs - rhs) <= 1e-12


# --- Swendsen-Wang and heat-bath chains -------------------------------------

class PottsSW:
    """Bond/recolor chain: open equal-spin edges with prob 1 - exp(-beta),
    then recolor each cluster uniformly (clusters touching a fixed boundary
    keep the prescribed color)."""

    def __init__(self, graph: SiteGraph, q: int, beta: float, boundary=None,
                 rng=None):
        if q < 2 or int(q) != q:
            raise ValueError("recoloring requires integer q >= 2")
        self.graph = graph
        self.q = int(q)
        self.beta = beta
        self.p = beta_to_p(beta)
        self.boundary = boundary
        self.fixed = fixed_sites(graph, boundary)
        self.gen = rng.generator if hasattr(rng, "generator") else rng
        spins = self.gen.integers(1, q + 1, graph.n_sites)
        for s, c in self.fixed.items():
            spins[s] = c
        self.spins = spins.astype(np.int64)
        self._last_bonds = np.zeros(len(graph.edge_array), dtype=bool)

    def step(self):
        g, spins = self.graph, self.spins
        e = g.edge_array
        eq = spins[e[:, 0]] == spins[e[:, 1]]
        opened = eq & (self.gen.random(len(e)) < self.p)
        self._last_bonds = opened
        uf = UnionFind(g.n_sites)
        for a, b in e[opened]:
            uf.union(int(a), int(b))
        roots = np.fromiter((uf.find(s) for s in range(g.n_sites)),
                            dtype=np.int64, count=g.n_sites)
        uniq, inv = np.unique(roots, return_inverse=True)
        colors = self.gen.integers(1, self.q + 1, len(uniq))
        # clusters touching fixed sites keep the fixed color
        for s, c in self.fixed.items():
            colors[inv[s]] = c
        self.spins = colors[inv].astype(np.int64)

    def run(self, sweeps: int):
        for _ in range(sweeps):
            self.step()
        return self

    def config(self) -> SpinConfig:
        return SpinConfig(self.graph, self.spins.copy(), self.q, self.boundary)

    def bond_config(self, p: float | None = None) -> BondConfig:
        """FK sample: the bond half of the last coupling step."""
        return BondConfig(self.graph, self._last_bonds.copy(),
                          p=self.p if p is None else p, q=float(self.q))


def sample_potts_sw(graph: SiteGraph, q: int, beta: float, boundary,
                    sweeps: int, rng) -> SpinConfig:
    if sweeps < 1:
        raise ValueError("need at least one sweep")
    return PottsSW(graph, q, beta, boundary, rng).run(sweeps).config()


def sample_fk_sw(graph: SiteGraph, p: float, q: int, sweeps: int, rng) -> BondConfig:
    """Random-cluster sample via the coupled chain (bond marginal)."""
    chain = PottsSW(graph, q, p_to_beta(p), None, rng).run(sweeps)
    chain.step()
    return chain.bond_config(p)


class PottsHeatBath:
    """Single-site conditional resampling; independent cross-check chain."""

    def __init__(self, graph: SiteGraph, q: int, beta: float, boundary=None,
                 rng=None):
        self.graph = graph
        self.q = int(q)
        self.beta = beta
        self.fixed = fixed_sites(graph, boundary)
        self.gen = rng.generator if hasattr(rng, "generator") else rng
        spins = self.gen.integers(1, q + 1, graph.n_sites)
        for s, c in self.fixed.items():
            spins[s] = c
        self.spins = spins.astype(np.int64)
        self.free = np.array([s for s in range(graph.n_sites) if s not in self.fixed])

    def sweep(self):
        for s in self.free:
            nbr = self.spins[self.graph.neighbor_lists[s]]
            disagree = np.array([(nbr != c).sum() for c in range(1, self.q + 1)])
            w = np.exp(-self.beta * disagree)
            w /= w.sum()
            self.spins[s] = 1 + self.gen.choice(self.q, p=w)

    def run(self, sweeps):
        for _ in range(sweeps):
            self.sweep()
        return self


def sw_transition_matrix(graph: SiteGraph, q: int, beta: float):
    """Exact one-step kernel of the Swendsen-Wang chain (free boundary)."""
    states = [tuple(s) for s in _spin_states(graph, q)]
    index = {s: k for k, s in enumerate(states)}
    p = beta_to_p(beta)
    e = graph.edge_array
    P = np.zeros((len(states), len(states)))
    for s_tuple in states:
        spins = np.array(s_tuple)
        eq_idx = np.flatnonzero(spins[e[:, 0]] == spins[e[:, 1]])
        row = index[s_tuple]
        for bits in product((False, True), repeat=len(eq_idx)):
            arr = np.array(bits, dtype=bool)
            prob_b = (p**arr.sum()) * ((1 - p)**(len(eq_idx) - arr.sum()))
            uf = UnionFind(graph.n_sites)
            for (a, b) in e[eq_idx[arr]]:
                uf.union(int(a), int(b))
            comps = uf.components()
            share = prob_b / (q ** len(comps))
            for colors in product(range(1, q + 1), repeat=len(comps)):
                out = np.empty(graph.n_sites, dtype=np.int64)
                for comp, c in zip(comps, colors):
                    out[comp] = c
                P[row, index[tuple(out)]] += share
    return states, P


def two_point_function(samples, x: int, y: int, q: int) -> stats.EstimateWithCI:
    """Empirical agreement frequency minus 1/q."""
    if x == y:
        return stats.EstimateWithCI(1.0 - 1.0 / q, 0.0, max(len(samples), 1))
    arr = np.asarray(samples)
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise ValueError("need at least one sample row")
    agree = (arr[:, x] == arr[:, y]).astype(float) - 1.0 / q
    return stats.mean_estimate(agree)


# --- uniform spanning trees --------------------------------------------------

def sample_ust_wilson(graph: SiteGraph, rng) -> BondConfig:
    """Uniform spanning tree by loop-erased random walks to a growing root set."""
    if not graph.is_connected():
        raise ValueError("spanning trees require a connected graph")
    gen = rng.generator if hasattr(rng, "generator") else rng
    n = graph.n_sites
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    nxt = np.full(n, -1, dtype=np.int64)
    for v in range(1, n):
        u = v
        while not in_tree[u]:
            nbrs = graph.neighbor_lists[u]
            nxt[u] = nbrs[gen.integers(len(nbrs))]
            u = nxt[u]
        u = v
        while not in_tree[u]:
            in_tree[u] = True
            u = nxt[u]
    edge_index = {(int(a), int(b)): k for k, (a, b) in enumerate(graph.edge_array)}
    open_edges = np.zeros(len(graph.edge_array), dtype=bool)
    for v in range(1, n):
        a, b = sorted((v, int(nxt[v])))
        open_edges[edge_index[(a, b)]] = True
    return BondConfig(graph, open_edges, p=0.0, q=0.0)


# --- planar duality on a square patch ---------------------------------------

@dataclass
class SquarePatchDual:
    """Dual graph of an nx x ny grid: one site per interior face plus the
    outer face, with the edge bijection primal<->dual."""

    primal: SiteGraph
    dual: SiteGraph
    edge_map: np.ndarray  # dual edge index for each primal edge index

    @classmethod
    def build(cls, nx: int, ny: int):
        primal = grid_graph(nx, ny)
        fx, fy = nx - 1, ny - 1
        outer = fx * fy

        def fidx(i, j):
            if 0 <= i < fx and 0 <= j < fy:
                return j * fx + i
            return outer

        pairs = []
        for k, (a, b) in enumerate(primal.edge_array):
            ia, ja = a % nx, a // nx
            ib, jb = b % nx, b // nx
            if ja == jb:  # horizontal edge: faces above and below
                i = min(ia, ib)
                pairs.append((k, fidx(i, ja - 1), fidx(i, ja)))
            else:         # vertical edge: faces left and right
                j = min(ja, jb)
                pairs.append((k, fidx(ia - 1, j), fidx(ia, j)))
        dual_edges = []
        edge_map = np.empty(len(primal.edge_array), dtype=np.int64)
        for k, fa, fb in pairs:  # parallel dual edges are kept (one per primal edge)
            edge_map[k] = len(dual_edges)
            dual_edges.append((min(fa, fb), max(fa, fb)))
        dual = SiteGraph(outer + 1, np.array(dual_edges))
        return cls(primal, dual, edge_map)


def dual_parameter(p: float, q: float) -> float:
    """p* with p*/(1-p*) = q(1-p)/p."""
    if q <= 0:
        return 1.0 - p
    if p <= 0:
        return 1.0
    return float(q * (1 - p) / (q * (1 - p) + p))


def dual_config(config: BondConfig, patch: SquarePatchDual) -> BondConfig:
    """Dual edge open iff the crossing primal edge is closed."""
    dual_open = np.empty(len(patch.dual.edge_array), dtype=bool)
    dual_open[patch.edge_map] = ~config.open_edges
    return BondConfig(patch.dual, dual_open,
                      p=dual_parameter(config.p, config.q), q=config.q)
