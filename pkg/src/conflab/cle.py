"""Loop-soup clusters, their outer boundaries, and ensemble diagnostics.

Clusters are connected components of the loop-intersection graph (exact
segment predicates, bounding-box pruned).  Each cluster's hull comes from
rasterizing the union of its loops; hulls that end up nested inside another
hull are dropped, which yields a simple (disjoint, non-nested) configuration.

The resampling diagnostic re-runs a sampler inside the domain obtained by
carving the exiting loops out of a subdomain and compares interior summary
statistics between the original and regenerated ensembles with a paired
permutation test; a sampler without the spatial Markov property fails it.

Mandelbrot fractal percolation (recursive dyadic retention) provides the
comparison model for small-intensity soups, with the branching-process
recursion as its exact extinction oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from . import stats
from .brownian import (DiscRegion, LoopSoup, sample_loop_soup, thin_soup,
                       window_mass)
from .loops import LoopPath, crossing_parity, polylines_intersect
from .rng import RngStream
from .unionfind import UnionFind


# --- regions with carve-outs --------------------------------------------------

@dataclass(frozen=True)
class ClippedRegion:
    """Disc (or other base) intersected with {Re z >= x_min}, minus the
    closed interiors of a set of excluded hull loops."""

    base: DiscRegion
    x_min: float = -np.inf
    excluded: tuple = ()

    def bbox(self):
        x0, x1, y0, y1 = self.base.bbox()
        return (max(x0, self.x_min), x1, y0, y1)

    def contains_points(self, pts) -> bool:
        if not self.base.contains_points(pts):
            return False
        if np.min(pts.real) < self.x_min:
            return False
        if self.excluded:
            xy = np.column_stack([pts.real, pts.imag])
            for hull in self.excluded:
                if polylines_intersect(xy, hull.vertices):
                    return False
                if crossing_parity(hull.vertices, xy[0]) == 1:
                    return False
        return True


@dataclass
class SimpleLoopConfig:
    region: object
    loops: list  # LoopPath hulls

    def validate(self):
        """Disjoint (no proper crossing) and non-nested."""
        for i in range(len(self.loops)):
            for j in range(i + 1, len(self.loops)):
                vi = self.loops[i].vertices
                vj = self.loops[j].vertices
                if polylines_intersect(vi, vj, proper_only=True):
                    raise AssertionError(f"loops {i} and {j} cross")
                if crossing_parity(vj, vi[0]) == 1 or \
                   crossing_parity(vi, vj[0]) == 1:
                    raise AssertionError(f"loops {i} and {j} are nested")
        return self


# --- clustering ----------------------------------------------------------------

def cluster_loops(soup: LoopSoup | list) -> list[list[int]]:
    """Index sets of connected components of the loop-intersection graph."""
    loops = soup.loops if hasattr(soup, "loops") else list(soup)
    polys = [l.xy() if hasattr(l, "xy") else np.asarray(l.vertices) for l in loops]
    n = len(polys)
    if n == 0:
        return []
    boxes = np.array([[p[:, 0].min(), p[:, 0].max(), p[:, 1].min(), p[:, 1].max()]
                      for p in polys])
    uf = UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if uf.connected(i, j):
                continue
            if boxes[i, 1] < boxes[j, 0] or boxes[j, 1] < boxes[i, 0] or \
               boxes[i, 3] < boxes[j, 2] or boxes[j, 3] < boxes[i, 2]:
                continue
            if polylines_intersect(polys[i], polys[j]):
                uf.union(i, j)
    return uf.components()


def _cluster_hull(polys, h):
    from .brownian import _contour_midpoints, _rasterize
    from scipy import ndimage as ndi
    pts = np.vstack(polys)
    lo = pts.min(axis=0) - 2 * h
    hi = pts.max(axis=0) + 2 * h
    shape = (int(np.ceil((hi[0] - lo[0]) / h)) + 6,
             int(np.ceil((hi[1] - lo[1]) / h)) + 6)
    mask = np.zeros(shape, dtype=bool)
    for p in polys:
        m, plo, _ = _rasterize(p[:, 0] + 1j * p[:, 1], h)
        oi = int(round((plo[0] - lo[0]) / h))
        oj = int(round((plo[1] - lo[1]) / h))
        ni = min(m.shape[0], shape[0] - oi)
        nj = min(m.shape[1], shape[1] - oj)
        mask[oi:oi + ni, oj:oj + nj] |= m[:ni, :nj]
    filled = ndi.binary_fill_holes(mask)
    mids = _contour_midpoints(filled)
    verts = lo[None, :] + (mids - 1.0) * h
    verts = np.vstack([verts, verts[:1]])
    return LoopPath(verts)


def outermost_boundaries(soup_or_loops, clusters=None, resolution: int = 200) -> SimpleLoopConfig:
    """Hull per cluster, keeping only hulls not nested in another hull.

    If raster hulls of distinct clusters properly cross (sub-resolution
    near-touches), those clusters are merged and re-hulled, so the output
    always satisfies the simple-configuration invariants.
    """
    loops = soup_or_loops.loops if hasattr(soup_or_loops, "loops") else list(soup_or_loops)
    region = getattr(soup_or_loops, "region", None)
    polys = [l.xy() if hasattr(l, "xy") else np.asarray(l.vertices) for l in loops]
    if clusters is None:
        clusters = cluster_loops(loops)
    groups = [list(c) for c in clusters]
    for _ in range(6):
        hulls = []
        for comp in groups:
            pts = np.vstack([polys[i] for i in comp])
            diam = float(np.hypot(*(pts.max(axis=0) - pts.min(axis=0))))
            h = max(diam / resolution, 1e-9)
            hulls.append(_cluster_hull([polys[i] for i in comp], h))
        crossing = None
        for i in range(len(hulls)):
            for j in range(i + 1, len(hulls)):
                if polylines_intersect(hulls[i].vertices, hulls[j].vertices,
                                       proper_only=True):
                    crossing = (i, j)
                    break
            if crossing:
                break
        if crossing is None:
            break
        i, j = crossing
        groups[i] = groups[i] + groups[j]
        del groups[j]
    keep = []
    for i, hull in enumerate(hulls):
        nested = any(k != i and crossing_parity(hulls[k].vertices, hull.vertices[0]) == 1
                     for k in range(len(hulls)))
        if not nested:
            keep.append(hull)
    return SimpleLoopConfig(region, keep)


def combine_ensembles(gamma1: SimpleLoopConfig, gamma2: SimpleLoopConfig,
                      resolution: int = 200) -> SimpleLoopConfig:
    """Union the loops, cluster, hull, keep outermost."""
    loops = list(gamma1.loops) + list(gamma2.loops)
    if not loops:
        return SimpleLoopConfig(gamma1.region, [])
    out = outermost_boundaries(loops, resolution=resolution)
    out.region = gamma1.region
    return out


# --- soup-boundary sampler and resampling diagnostic ---------------------------

@dataclass
class SoupBoundarySampler:
    """Loop-soup cluster boundaries in an arbitrary region."""

    c: float
    t_window: tuple = (0.05, 4.0)
    steps: int = 192
    resolution: int = 150

    def __call__(self, region, rng: RngStream) -> SimpleLoopConfig:
        soup = sample_loop_soup(region, self.c, self.t_window, self.steps, rng)
        cfg = outermost_boundaries(soup, resolution=self.resolution)
        cfg.region = region
        return cfg


@dataclass
class IidDiscDecoySampler:
    """Fixed number of disjoint-ish discs; deliberately not Markovian."""

    count: int = 3
    rel_radius: float = 0.45

    def __call__(self, region, rng: RngStream) -> SimpleLoopConfig:
        gen = rng.generator
        x0, x1, y0, y1 = region.bbox()
        loops = []
        tries = 0
        while len(loops) < self.count and tries < 400:
            tries += 1
            z = complex(gen.uniform(x0, x1), gen.uniform(y0, y1))
            if not region.contains_points(np.array([z])):
                continue
            r = self.rel_radius * gen.uniform(0.2, 1.0) * self._clearance(region, z)
            if r <= 0.005:
                continue
            t = np.linspace(0, 2 * np.pi, 48, endpoint=False)
            circ = z + r * np.exp(1j * t)
            if not region.contains_points(circ):
                continue
            cand = LoopPath(np.column_stack(
                [np.append(circ.real, circ.real[0]),
                 np.append(circ.imag, circ.imag[0])]))
            if any(polylines_intersect(cand.vertices, l.vertices) or
                   crossing_parity(l.vertices, cand.vertices[0]) == 1 or
                   crossing_parity(cand.vertices, l.vertices[0]) == 1
                   for l in loops):
                continue
            loops.append(cand)
        return SimpleLoopConfig(region, loops)

    @staticmethod
    def _clearance(region, z):
        base = region.base if isinstance(region, ClippedRegion) else region
        d = base.radius - abs(z - base.center)
        if isinstance(region, ClippedRegion):
            if np.isfinite(region.x_min):
                d = min(d, z.real - region.x_min)
            for hull in region.excluded:
                v = hull.vertices
                d = min(d, float(np.min(np.hypot(v[:, 0] - z.real, v[:, 1] - z.imag))))
        return max(d, 0.0)


def split_interior_exterior(config: SimpleLoopConfig, subregion) -> tuple[list, list]:
    """Loops staying in the subregion vs loops exiting it."""
    inside, outside = [], []
    for loop in config.loops:
        pts = loop.vertices[:, 0] + 1j * loop.vertices[:, 1]
        (inside if subregion.contains_points(pts) else outside).append(loop)
    return inside, outside


def probe_count(loops, center=0.45 + 0.0j, radius=0.25) -> int:
    n = 0
    for loop in loops:
        v = loop.vertices
        if np.min(np.hypot(v[:, 0] - center.real, v[:, 1] - center.imag)) < radius:
            n += 1
        elif crossing_parity(v, (center.real, center.imag)) == 1:
            n += 1
    return n


def largest_area(loops) -> float:
    return max((l.area() for l in loops), default=0.0)


def markov_resample_test(sampler, n: int, rng: RngStream,
                         x_min: float = 0.0, p_threshold: float = 0.001):
    """Regenerate interior loops in the carved subdomain and compare.

    For each replica: sample in the disc, split at the half-disc D', carve
    the exiting loops' hulls out of D', resample there, then compare probe
    counts and largest areas (original interior vs resampled) by paired
    permutation tests.
    """
    disc = DiscRegion()
    dprime = ClippedRegion(disc, x_min)
    counts = np.zeros((n, 2))
    areas = np.zeros((n, 2))
    for k in range(n):
        cfg = sampler(disc, rng.derive(2 * k))
        interior, exterior = split_interior_exterior(cfg, dprime)
        carved = ClippedRegion(disc, x_min, tuple(exterior))
        regen = sampler(carved, rng.derive(2 * k + 1))
        counts[k] = probe_count(interior), probe_count(regen.loops)
        areas[k] = largest_area(interior), largest_area(regen.loops)
    p_count = stats.paired_permutation_pvalue(counts[:, 0], counts[:, 1],
                                              rng.derive(10**6))
    p_area = stats.paired_permutation_pvalue(areas[:, 0], areas[:, 1],
                                             rng.derive(10**6 + 1))
    return {
        "n": n,
        "p_count": p_count,
        "p_area": p_area,
        "mean_count": (float(counts[:, 0].mean()), float(counts[:, 1].mean())),
        "mean_area": (float(areas[:, 0].mean()), float(areas[:, 1].mean())),
        "passed": min(p_count, p_area) > p_threshold,
    }


# --- Mandelbrot fractal percolation --------------------------------------------

@dataclass
class QuadtreeSet:
    p: float
    levels: list  # levels[k] is a (2^(k+1) x 2^(k+1)) bool array

    @property
    def depth(self) -> int:
        return len(self.levels)

    def final(self) -> np.ndarray:
        return self.levels[-1]

    def is_empty(self) -> bool:
        return not bool(self.final().any())


def sample_mandelbrot(p: float, depth: int, rng: RngStream,
                      uniforms: list | None = None) -> QuadtreeSet:
    """Recursive Bernoulli(p) retention of dyadic squares.

    Supplying shared uniforms couples realizations monotonically across p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0,1]")
    if depth > 12:
        raise ValueError("depth beyond budget")
    gen = rng.generator if hasattr(rng, "generator") else rng
    levels = []
    parent = np.ones((1, 1), dtype=bool)
    for k in range(depth):
        m = 2 ** (k + 1)
        u = uniforms[k] if uniforms is not None else gen.random((m, m))
        keep = (u < p) & np.repeat(np.repeat(parent, 2, 0), 2, 1)
        levels.append(keep)
        parent = keep
    return QuadtreeSet(p, levels)


def mandelbrot_uniforms(depth: int, rng: RngStream) -> list:
    gen = rng.generator if hasattr(rng, "generator") else rng
    return [gen.random((2 ** (k + 1), 2 ** (k + 1))) for k in range(depth)]


def mandelbrot_crossing(qt: QuadtreeSet) -> bool:
    """Left-right crossing of retained finest squares under edge adjacency."""
    final = qt.final()
    if not final.any():
        return False
    labels, _ = ndimage.label(final)  # default structure = edge adjacency
    left = set(labels[0, :][labels[0, :] > 0].tolist())
    right = set(labels[-1, :][labels[-1, :] > 0].tolist())
    return bool(left & right)


def branching_extinction_probability(p: float, depth: int) -> float:
    """Exact P(no retained square at the given depth): iterate the
    offspring generating function (1 - p + p s)^4."""
    s = 0.0
    for _ in range(depth):
        s = (1.0 - p + p * s) ** 4
    return float(s)


# --- soup vs fractal percolation -----------------------------------------------

def soup_square_survival(c: float, levels, n: int, rng: RngStream,
                         t_window=(1e-4, 1.0), steps: int = 128):
    """P(no diameter-class-n loop touches a central square) per level."""
    from .brownian import SquareRegion
    region = SquareRegion()
    out = {lev: [] for lev in levels}
    for k in range(n):
        soup = sample_loop_soup(region, c, t_window, steps, rng.derive(k))
        diams = np.array([l.diameter() for l in soup.loops]) if soup.loops else np.array([])
        for lev in levels:
            side = 2.0 ** -lev
            # central cell of the dyadic grid at this level
            i0 = (2 ** lev) // 2
            cx0, cx1 = i0 * side, (i0 + 1) * side
            hit = False
            for loop, d in zip(soup.loops, diams):
                if not (0.5 * side <= d < side):
                    continue
                pts = loop.points
                if np.any((pts.real >= cx0) & (pts.real <= cx1)
                          & (pts.imag >= cx0) & (pts.imag <= cx1)):
                    hit = True
                    break
            out[lev].append(0 if hit else 1)
    return {lev: stats.binomial_estimate(int(np.sum(v)), n) for lev, v in out.items()}


def soup_domination_check(c_values, levels, n: int, rng: RngStream):
    """Survival estimates per level and intensity, with the log-linear fit
    of survival against c (slope -b) and level-consistency z-scores."""
    table = {}
    for c in c_values:
        table[c] = soup_square_survival(c, levels, n, rng.derive(int(c * 1000)))
    mean_surv = {c: np.mean([table[c][lev].mean for lev in levels]) for c in c_values}
    cs = np.array(sorted(c_values))
    logs = np.log([max(mean_surv[c], 1e-12) for c in cs])
    slope, intercept, se, r2 = stats.linear_fit(cs, logs)
    zmax = 0.0
    for c in c_values:
        ests = [table[c][lev] for lev in levels]
        for i in range(len(ests)):
            for j in range(i + 1, len(ests)):
                denom = np.hypot(ests[i].std_error, ests[j].std_error)
                if denom > 0:
                    zmax = max(zmax, abs(ests[i].mean - ests[j].mean) / denom)
    return {"table": table, "b_hat": -slope, "r_squared": r2,
            "max_level_z": zmax}


def macroscopic_cluster_counts(region, c_grid, t_window, steps: int,
                               n: int, rng: RngStream,
                               fraction: float = 0.25):
    """Coupled-soup census: per intensity, the macroscopic-cluster count,
    whether at least one / exactly one macroscopic cluster exists, and an
    exact check that every lower-intensity cluster sits inside some
    higher-intensity cluster."""
    x0, x1, y0, y1 = region.bbox()
    domain_diam = float(np.hypot(x1 - x0, y1 - y0))
    threshold = fraction * domain_diam
    c_grid = sorted(c_grid)
    c_max = c_grid[-1]
    results = {c: {"macro_counts": [], "any_macro": [], "single_macro": []}
               for c in c_grid}
    coupling_ok = True
    for k in range(n):
        soup = sample_loop_soup(region, c_max, t_window, steps, rng.derive(k))
        prev_assign = None
        for c in c_grid:
            sub = thin_soup(soup, c)
            clusters = cluster_loops(sub)
            # map member loops back to identity for the coupling check
            ids = [[id(sub.loops[i]) for i in comp] for comp in clusters]
            macro = 0
            for comp in clusters:
                pts = np.vstack([sub.loops[i].xy() for i in comp])
                diam = float(np.hypot(*(pts.max(axis=0) - pts.min(axis=0))))
                if diam >= threshold:
                    macro += 1
            results[c]["macro_counts"].append(macro)
            results[c]["any_macro"].append(macro >= 1)
            results[c]["single_macro"].append(macro == 1)
            if prev_assign is not None:
                cluster_of = {}
                for ci, comp in enumerate(ids):
                    for lid in comp:
                        cluster_of[lid] = ci
                for comp_prev in prev_assign:
                    owners = {cluster_of.get(lid) for lid in comp_prev}
                    if len(owners) != 1 or None in owners:
                        coupling_ok = False
            prev_assign = ids
    return results, coupling_ok
