"""Random-walk loop classes, Brownian bridges, and the Poisson loop soup.

The loop measure factorizes as (area) x (dT / 2 pi T^2) x (unit bridge law),
which is infinite as T -> 0; every sampler here works under an explicit
(T_min, T_max) window carried by the resulting LoopSoup, and all reported
masses are masses of the windowed class.

Hulls (outer boundaries) are extracted by rasterizing the path, filling the
holes, and walking the boundary of the filled region; the walk emits edge
midpoints so the output polyline is self-avoiding even at pinch corners.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .loops import LoopPath
from .rng import RngStream


# --- random-walk loops -------------------------------------------------------

LATTICE_DEGREE = {"hexagonal": 3, "square": 4, "triangular": 6}


def rw_loop_mass(vertices, lattice: str) -> float:
    """Weight d**-n of a closed nearest-neighbor lattice path of n steps."""
    d = LATTICE_DEGREE[lattice]
    verts = list(vertices)
    if verts[0] != verts[-1]:
        raise ValueError("path is not closed")
    from .loopmodels import _moves
    for a, b in zip(verts[:-1], verts[1:]):
        if b not in _moves(lattice, a):
            raise ValueError("not a nearest-neighbor path")
    n = len(verts) - 1
    return float(d) ** (-n)


def enumerate_rw_loops(lattice: str, n_max: int, through=None):
    """All loop classes through a site, with masses, for n <= n_max.

    Classes identify loops modulo shift of the time parametrization.  Returns
    {n: list of canonical vertex tuples}; masses are d**-n.
    """
    if n_max > 12:
        raise ValueError("n_max beyond the enumeration budget")
    from .loopmodels import _moves, _origin
    origin = _origin(lattice) if through is None else through
    out: dict[int, set] = {n: set() for n in range(1, n_max + 1)}

    def canonical(seq):
        rots = [tuple(seq[k:] + seq[:k]) for k in range(len(seq))]
        return min(rots)

    path = [origin]

    def dfs(depth):
        for nxt in _moves(lattice, path[-1]):
            if nxt == origin and depth >= 1:
                out[depth].add(canonical(path[:]))
            if depth < n_max:
                path.append(nxt)
                dfs(depth + 1)
                path.pop()

    dfs(1)
    d = LATTICE_DEGREE[lattice]
    return {n: [(cls, d ** (-n)) for cls in sorted(classes)]
            for n, classes in out.items() if classes}


def rw_loop_class_count_by_periods(lattice: str, n: int) -> float:
    """Independent count of n-step loop classes through the origin.

    Iterates rooted closed walks and weights each by period/(visits*n); every
    shift class contributes exactly 1 in total.
    """
    from .loopmodels import _moves, _origin
    origin = _origin(lattice)
    total = 0.0
    seq = [origin]

    def period(vertices):
        m = len(vertices)
        for p in range(1, m + 1):
            if m % p == 0 and all(vertices[k] == vertices[(k + p) % m] for k in range(m)):
                return p
        return m

    def dfs(depth):
        nonlocal total
        for nxt in _moves(lattice, seq[-1]):
            if depth == n:
                if nxt == origin:
                    verts = tuple(seq)
                    v = sum(1 for w in verts if w == origin)
                    # a class with v origin-visits and period p has v*p/n
                    # distinct origin-rooted representatives
                    total += n / (v * period(verts))
                continue
            seq.append(nxt)
            dfs(depth + 1)
            seq.pop()

    dfs(1)
    return total


# --- Brownian bridges and loops ----------------------------------------------

@dataclass
class PlanarPath:
    times: np.ndarray    # (m+1,), increasing, times[0] = 0
    points: np.ndarray   # (m+1,) complex

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.points = np.asarray(self.points, dtype=complex)
        if self.times.shape != self.points.shape:
            raise ValueError("times and points must align")
        if self.times[0] != 0.0:
            raise ValueError("paths start at time 0")

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    def is_bridge(self) -> bool:
        return bool(np.isclose(abs(self.points[0] - self.points[-1]), 0.0))

    def xy(self) -> np.ndarray:
        return np.column_stack([self.points.real, self.points.imag])

    def diameter(self) -> float:
        xy = self.xy()
        lo, hi = xy.min(axis=0), xy.max(axis=0)
        return float(np.hypot(*(hi - lo)))


def sample_brownian_bridge(steps: int, rng: RngStream) -> PlanarPath:
    """Unit-duration planar bridge from 0 to 0: walk minus linear drift."""
    if steps < 2:
        raise ValueError("need at least 2 steps")
    gen = rng.generator if hasattr(rng, "generator") else rng
    dt = 1.0 / steps
    inc = (gen.normal(size=steps) + 1j * gen.normal(size=steps)) * np.sqrt(dt)
    walk = np.concatenate([[0.0 + 0.0j], np.cumsum(inc)])
    t = np.linspace(0.0, 1.0, steps + 1)
    bridge = walk - t * walk[-1]
    return PlanarPath(t, bridge)


def rescale_loop(path: PlanarPath, z: complex, duration: float) -> PlanarPath:
    """Root the unit bridge at z with duration T: z + sqrt(T) * path(t/T)."""
    if duration <= 0:
        raise ValueError("duration must be positive")
    return PlanarPath(path.times * duration, z + np.sqrt(duration) * path.points)


# --- regions for continuum sampling ------------------------------------------

@dataclass(frozen=True)
class DiscRegion:
    center: complex = 0.0 + 0.0j
    radius: float = 1.0

    def bbox(self):
        c, r = self.center, self.radius
        return (c.real - r, c.real + r, c.imag - r, c.imag + r)

    def contains_points(self, pts) -> bool:
        return bool(np.all(np.abs(pts - self.center) <= self.radius))

    def area(self) -> float:
        return float(np.pi * self.radius**2)


@dataclass(frozen=True)
class SquareRegion:
    x0: float = 0.0
    x1: float = 1.0
    y0: float = 0.0
    y1: float = 1.0

    def bbox(self):
        return (self.x0, self.x1, self.y0, self.y1)

    def contains_points(self, pts) -> bool:
        return bool(np.all((pts.real >= self.x0) & (pts.real <= self.x1)
                           & (pts.imag >= self.y0) & (pts.imag <= self.y1)))

    def area(self) -> float:
        return float((self.x1 - self.x0) * (self.y1 - self.y0))


def window_mass(region, t_min: float, t_max: float, c: float = 1.0) -> float:
    """Total candidate intensity over the region's bounding box and T window."""
    if not 0 < t_min < t_max:
        raise ValueError("need 0 < T_min < T_max")
    x0, x1, y0, y1 = region.bbox()
    box_area = (x1 - x0) * (y1 - y0)
    return float(c * box_area * (1.0 / t_min - 1.0 / t_max) / (2.0 * np.pi))


@dataclass
class LoopSoup:
    intensity: float
    t_window: tuple[float, float]
    region: object
    loops: list                       # kept PlanarPaths (entirely inside)
    n_candidates: int
    candidate_mass: float             # c * mass of the box-window class
    arrival_marks: np.ndarray = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return len(self.loops)


def sample_loop_soup(region, c: float, t_window, steps: int,
                     rng: RngStream) -> LoopSoup:
    """Poisson soup of bridge loops with intensity c over the T window.

    Candidates carry positions uniform on the bounding box and durations with
    density proportional to 1/T^2; loops leaving the region are discarded, so
    kept loops realize the soup of the region restricted to the window class.
    Arrival marks (uniform on [0, c]) support monotone coupling in c.
    """
    t_min, t_max = t_window
    mass = window_mass(region, t_min, t_max, c)
    gen = rng.generator if hasattr(rng, "generator") else rng
    n_cand = int(gen.poisson(mass)) if c > 0 else 0
    x0, x1, y0, y1 = region.bbox()
    loops = []
    marks = []
    for _ in range(n_cand):
        z = complex(gen.uniform(x0, x1), gen.uniform(y0, y1))
        u = gen.random()
        T = 1.0 / (1.0 / t_min - u * (1.0 / t_min - 1.0 / t_max))
        bridge = sample_brownian_bridge(steps, RngStream(int(gen.integers(2**62)), 0))
        loop = rescale_loop(bridge, z, T)
        if region.contains_points(loop.points):
            loops.append(loop)
            marks.append(gen.uniform(0.0, c))
    return LoopSoup(c, (t_min, t_max), region, loops, n_cand, mass,
                    np.array(marks))


def thin_soup(soup: LoopSoup, c: float) -> LoopSoup:
    """Sub-soup of intensity c <= soup.intensity via the arrival marks."""
    if c > soup.intensity:
        raise ValueError("can only thin downward")
    keep = soup.arrival_marks <= c
    loops = [l for l, k in zip(soup.loops, keep) if k]
    return LoopSoup(c, soup.t_window, soup.region, loops, soup.n_candidates,
                    soup.candidate_mass * c / soup.intensity,
                    soup.arrival_marks[keep])


# --- hulls --------------------------------------------------------------------

def _rasterize(points: np.ndarray, h: float):
    """Cell mask of a closed polyline, 4-connected along the path."""
    xy = np.column_stack([points.real, points.imag])
    lo = xy.min(axis=0) - 2.0 * h
    hi = xy.max(axis=0) + 2.0 * h
    shape = (int(np.ceil((hi[0] - lo[0]) / h)) + 1,
             int(np.ceil((hi[1] - lo[1]) / h)) + 1)
    seg = np.diff(xy, axis=0)
    seglen = np.hypot(seg[:, 0], seg[:, 1])
    n_sub = np.maximum(1, np.ceil(seglen / (0.5 * h)).astype(np.int64))
    idx = np.repeat(np.arange(len(seg)), n_sub)
    total = int(n_sub.sum())
    starts = np.cumsum(n_sub) - n_sub
    steps_in_seg = np.arange(total) - np.repeat(starts, n_sub)
    frac = steps_in_seg / np.repeat(n_sub, n_sub)
    pts = xy[:-1][idx] + frac[:, None] * seg[idx]
    pts = np.vstack([pts, xy[-1]])
    cells = np.floor((pts - lo) / h).astype(np.int64)
    # make consecutive cells 4-connected: insert the corner cell on diagonal hops
    d = np.diff(cells, axis=0)
    diag = np.flatnonzero((np.abs(d[:, 0]) == 1) & (np.abs(d[:, 1]) == 1))
    extra = np.column_stack([cells[diag, 0], cells[diag + 1, 1]])
    cells = np.vstack([cells, extra])
    mask = np.zeros(shape, dtype=bool)
    mask[cells[:, 0], cells[:, 1]] = True
    return mask, lo, shape


def hull_raster(points: np.ndarray, h: float):
    """(filled mask, lower-left corner) of the path's filled outer region."""
    mask, lo, _ = _rasterize(points, h)
    filled = ndimage.binary_fill_holes(mask)
    return filled, lo, mask


def hull_area(path_points: np.ndarray, h: float) -> float:
    """Area of the filled loop: cell count with a half-cell boundary correction."""
    filled, _, _ = hull_raster(path_points, h)
    interior = ndimage.binary_erosion(filled)
    boundary = int(filled.sum() - interior.sum())
    return float((filled.sum() - 0.5 * boundary) * h * h)


def hull_contains(filled: np.ndarray, lo, h: float, z: complex) -> bool:
    """Whether point z falls in a filled cell of a hull raster."""
    i = int(np.floor((z.real - lo[0]) / h))
    j = int(np.floor((z.imag - lo[1]) / h))
    if 0 <= i < filled.shape[0] and 0 <= j < filled.shape[1]:
        return bool(filled[i, j])
    return False


_TURNS = {(1, 0): [(0, 1), (1, 0), (0, -1)], (0, 1): [(-1, 0), (0, 1), (1, 0)],
          (-1, 0): [(0, -1), (-1, 0), (0, 1)], (0, -1): [(1, 0), (0, -1), (-1, 0)]}


def outer_boundary(path: PlanarPath | np.ndarray, h: float) -> LoopPath:
    """Hull of a closed path as a self-avoiding polyline loop."""
    points = path.points if isinstance(path, PlanarPath) else np.asarray(path)
    xy = np.column_stack([points.real, points.imag]) if np.iscomplexobj(points) else points
    diam = float(np.hypot(*(xy.max(axis=0) - xy.min(axis=0))))
    if diam < 2 * h:
        raise ValueError("path diameter below the raster resolution")
    pts_c = xy[:, 0] + 1j * xy[:, 1]
    filled, lo, _ = hull_raster(pts_c, h)
    mids = _contour_midpoints(filled)
    verts = lo[None, :] + (mids - 1.0) * h  # undo the one-cell pad
    verts = np.vstack([verts, verts[:1]])
    return LoopPath(verts)


def _contour_midpoints(filled: np.ndarray) -> np.ndarray:
    """Outer-contour edge midpoints of a filled hole-free region."""
    f = np.zeros((filled.shape[0] + 2, filled.shape[1] + 2), dtype=bool)
    f[1:-1, 1:-1] = filled
    edges = {}
    fi, fj = np.nonzero(f)
    for i, j in zip(fi, fj):
        if not f[i + 1, j]:
            edges[((i + 1, j), (i + 1, j + 1))] = True
        if not f[i - 1, j]:
            edges[((i, j + 1), (i, j))] = True
        if not f[i, j + 1]:
            edges[((i + 1, j + 1), (i, j + 1))] = True
        if not f[i, j - 1]:
            edges[((i, j), (i + 1, j))] = True
    by_start = {}
    for (a, b) in edges:
        by_start.setdefault(a, []).append(b)
    start_edge = min(edges)
    mids = []
    cur = start_edge
    while True:
        a, b = cur
        mids.append(((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0))
        d_in = (b[0] - a[0], b[1] - a[1])
        nxt = None
        for cand_dir in _TURNS[d_in]:
            cand = (b[0] + cand_dir[0], b[1] + cand_dir[1])
            if cand in by_start.get(b, []) and ((b, cand) in edges):
                nxt = (b, cand)
                break
        if nxt is None:
            raise RuntimeError("contour walk stuck")
        if nxt == start_edge:
            break
        cur = nxt
    return np.array(mids)
