"""Bernoulli site percolation (triangular) and bond percolation (square).

The triangular lattice is the one with the exactly known critical point
p_c = 1/2, and the one where cluster boundaries become honeycomb loops; the
square-lattice bond model is included as the other self-dual special case,
without boundary-loop extraction.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from . import stats
from .clusters import (BondConfig, SiteConfig, find_clusters,
                       loop_adjacent_hexagons, trace_outer_boundary)
from .lattice import LatticeDomain, grid_structure
from .loops import LoopPath
from .rng import RngStream

TRIANGULAR_PC = 0.5
SQUARE_BOND_PC = 0.5


def sample_site_percolation(domain: LatticeDomain, p: float,
                            rng: RngStream) -> SiteConfig:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0,1]")
    open_sites = rng.generator.random(domain.n_sites) < p
    return SiteConfig(domain, open_sites, p)


def sample_bond_percolation(domain_or_graph, p: float,
                            rng: RngStream) -> BondConfig:
    edges = domain_or_graph.edges()
    open_edges = rng.generator.random(len(edges)) < p
    return BondConfig(domain_or_graph, open_edges, p=p, q=1.0)


def perco_loop_mass(loop: LoopPath) -> float:
    """Probability that the loop is a cluster outer boundary at p = 1/2.

    Equals 2**-k with k the number of hexagonal cells adjacent to the loop
    (the enclosed cells must be open, the touching outside cells closed).
    """
    if not loop.is_self_avoiding():
        raise ValueError("loop must be self-avoiding")
    k = len(loop_adjacent_hexagons(loop))
    return 2.0 ** (-k)


def boundary_arc(domain: LatticeDomain, predicate) -> np.ndarray:
    """Boundary-site indices selected by predicate(x, y)."""
    idx = [int(s) for s in domain.boundary_sites
           if predicate(domain.positions[s, 0], domain.positions[s, 1])]
    return np.array(sorted(idx), dtype=np.int64)


def _grid_label_crossing(domain, p, arc_a, arc_b, n_samples, rng, color):
    grid = domain.grid
    structure = grid_structure(domain.kind)
    mask = grid.mask
    ij_a = grid.ij[arc_a]
    ij_b = grid.ij[arc_b]
    gen = rng.generator
    hits = 0
    for _ in range(n_samples):
        field = (gen.random(mask.shape) < p) & mask
        if color == "closed":
            field = mask & ~field
        labels, _ = ndimage.label(field, structure=structure)
        la = labels[ij_a[:, 0], ij_a[:, 1]]
        lb = labels[ij_b[:, 0], ij_b[:, 1]]
        la = la[la > 0]
        lb = lb[lb > 0]
        if la.size and lb.size and np.intersect1d(la, lb).size:
            hits += 1
    return hits


def crossing_occurs(config: SiteConfig, arc_a, arc_b, color="open") -> bool:
    """Single-configuration crossing decision (reference implementation)."""
    dom = config.domain
    is_open = config.open_sites if color == "open" else ~config.open_sites
    from .unionfind import UnionFind
    uf = UnionFind(dom.n_sites)
    for a in np.flatnonzero(is_open):
        for b in dom.neighbor_lists[a]:
            if b > a and is_open[b]:
                uf.union(int(a), int(b))
    roots_a = {uf.find(int(s)) for s in arc_a if is_open[s]}
    roots_b = {uf.find(int(s)) for s in arc_b if is_open[s]}
    return bool(roots_a & roots_b)


def estimate_crossing(domain: LatticeDomain, p: float, arc_a, arc_b,
                      n_samples: int, rng: RngStream,
                      color: str = "open") -> stats.EstimateWithCI:
    """Monte Carlo estimate of P(a single cluster joins arc_a to arc_b)."""
    arc_a = np.asarray(arc_a, dtype=np.int64)
    arc_b = np.asarray(arc_b, dtype=np.int64)
    if arc_a.size == 0 or arc_b.size == 0:
        raise ValueError("arcs must be nonempty")
    if np.intersect1d(arc_a, arc_b).size:
        raise ValueError("arcs must be disjoint")
    if n_samples < 1:
        raise ValueError("need n_samples >= 1")
    if domain.grid is not None:
        hits = _grid_label_crossing(domain, p, arc_a, arc_b, n_samples, rng, color)
    else:
        hits = 0
        for k in range(n_samples):
            cfg = sample_site_percolation(domain, p, rng.derive(k))
            hits += crossing_occurs(cfg, arc_a, arc_b, color)
    return stats.binomial_estimate(hits, n_samples)


def rhombus_arcs(domain: LatticeDomain, direction: str = "lr"):
    """Full opposite sides of a lattice-coordinate rhombus."""
    ij = np.array(domain.keys, dtype=np.int64)
    if direction == "lr":
        a = np.flatnonzero(ij[:, 0] == ij[:, 0].min())
        b = np.flatnonzero(ij[:, 0] == ij[:, 0].max())
    else:
        a = np.flatnonzero(ij[:, 1] == ij[:, 1].min())
        b = np.flatnonzero(ij[:, 1] == ij[:, 1].max())
    return a, b


def sample_cluster_loops(domain: LatticeDomain, rng: RngStream,
                         p: float = TRIANGULAR_PC) -> list[LoopPath]:
    """One percolation sample; outer boundary loop of every open cluster."""
    if domain.kind != "triangular":
        raise ValueError("cluster loops require the triangular lattice")
    config = sample_site_percolation(domain, p, rng)
    return [trace_outer_boundary(c, domain) for c in find_clusters(config)]


def isolated_site_stats(domain: LatticeDomain):
    """Grid machinery for counting fully-surrounded isolated open sites.

    Returns (eligible_mask, n_eligible): eligible sites are those whose six
    neighbors all lie in the domain, so that the single-hexagon boundary-loop
    probability is exactly 2**-7 for each of them.
    """
    if domain.kind != "triangular":
        raise ValueError("triangular lattice only")
    eligible = np.array([len(nb) == 6 and not domain.boundary_mask[k]
                         for k, nb in enumerate(domain.neighbor_lists)])
    return eligible, int(eligible.sum())


def count_isolated_open(config: SiteConfig, eligible_mask) -> int:
    """Number of eligible open sites with all six neighbors closed."""
    dom = config.domain
    grid = dom.grid
    ni, nj = grid.shape
    field = np.zeros((ni + 2, nj + 2), dtype=bool)
    field[1:-1, 1:-1][grid.ij[:, 0], grid.ij[:, 1]] = config.open_sites
    inner = field[1:-1, 1:-1]
    closed_nbrs = (~field[2:, 1:-1] & ~field[:-2, 1:-1]
                   & ~field[1:-1, 2:] & ~field[1:-1, :-2]
                   & ~field[2:, :-2] & ~field[:-2, 2:])
    hit = inner & closed_nbrs
    elig_grid = np.zeros((ni, nj), dtype=bool)
    elig_grid[grid.ij[:, 0], grid.ij[:, 1]] = eligible_mask
    return int(np.count_nonzero(hit & elig_grid))
