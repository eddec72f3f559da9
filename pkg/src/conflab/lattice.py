"""Lattice domains: square, triangular and hexagonal (honeycomb) patches.

Sites carry integer lattice keys; planar positions are derived from them.
Triangular sites double as hexagonal faces (their Voronoi cells), which is
how cluster boundaries end up as loops on the hexagonal edge graph.

Conventions, with mesh delta = nearest-neighbor spacing:
  square      key (i, j)     at delta*(i, j)
  triangular  key (i, j)     at delta*(i + j/2, j*sqrt(3)/2)
  hexagonal   key (s, i, j)  sublattice s in {0,1}; vertices sit at the
              centers of the up (s=0) / down (s=1) faces of a triangular
              lattice of mesh delta*sqrt(3).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SQRT3 = np.sqrt(3.0)

_TRI_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))
_SQ_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))

# ndimage structuring elements matching the key-grid adjacency
TRI_STRUCTURE = np.array([[0, 1, 1], [1, 1, 1], [1, 1, 0]], dtype=bool)
SQ_STRUCTURE = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


class EmptyDomainError(ValueError):
    pass


@dataclass(frozen=True)
class Rect:
    x0: float
    x1: float
    y0: float
    y1: float

    def bbox(self):
        return self.x0, self.x1, self.y0, self.y1

    def contains(self, x, y, eps):
        return (self.x0 - eps <= x <= self.x1 + eps
                and self.y0 - eps <= y <= self.y1 + eps)


@dataclass(frozen=True)
class HalfPlaneStrip:
    """Rectangle sitting on the real axis, used as a half-plane stand-in."""

    x0: float
    x1: float
    height: float

    def bbox(self):
        return self.x0, self.x1, 0.0, self.height

    def contains(self, x, y, eps):
        return (self.x0 - eps <= x <= self.x1 + eps
                and -eps <= y <= self.height + eps)


@dataclass(frozen=True)
class Disc:
    cx: float
    cy: float
    r: float

    def bbox(self):
        return self.cx - self.r, self.cx + self.r, self.cy - self.r, self.cy + self.r

    def contains(self, x, y, eps):
        return (x - self.cx) ** 2 + (y - self.cy) ** 2 <= (self.r + eps) ** 2


@dataclass(frozen=True)
class LatticeRhombus:
    """n x n block in triangular lattice coordinates (a planar rhombus)."""

    n: int


@dataclass
class GridLayout:
    """Dense (i, j) indexing for square/triangular domains."""

    i0: int
    j0: int
    shape: tuple[int, int]
    mask: np.ndarray        # bool, True where the site exists
    site_index: np.ndarray  # int, -1 outside
    ij: np.ndarray          # (n, 2) grid coordinates per site index


@dataclass
class LatticeDomain:
    kind: str
    delta: float
    keys: list
    positions: np.ndarray          # (n, 2)
    neighbor_lists: list           # per-site np.ndarray of site indices
    boundary_mask: np.ndarray      # bool per site
    grid: GridLayout | None = None
    _index: dict = field(default_factory=dict, repr=False)
    _edges: np.ndarray | None = field(default=None, repr=False)

    @property
    def n_sites(self) -> int:
        return len(self.keys)

    @property
    def dual_kind(self) -> str:
        return {"square": "square", "triangular": "hexagonal",
                "hexagonal": "triangular"}[self.kind]

    @property
    def boundary_sites(self) -> np.ndarray:
        return np.flatnonzero(self.boundary_mask)

    def index_of(self, key) -> int:
        return self._index[key]

    def degree(self) -> int:
        return {"square": 4, "triangular": 6, "hexagonal": 3}[self.kind]

    def edges(self) -> np.ndarray:
        """(m, 2) array of site-index pairs with a < b, lexicographically sorted."""
        if self._edges is None:
            pairs = set()
            for a, nbrs in enumerate(self.neighbor_lists):
                for b in nbrs:
                    pairs.add((a, int(b)) if a < b else (int(b), a))
            self._edges = np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)
        return self._edges


def lattice_steps(kind: str):
    if kind == "square":
        return _SQ_STEPS
    if kind == "triangular":
        return _TRI_STEPS
    raise ValueError(kind)


def _site_position(kind: str, key, delta: float):
    if kind == "square":
        i, j = key
        return delta * i, delta * j
    if kind == "triangular":
        i, j = key
        return delta * (i + 0.5 * j), delta * (SQRT3 / 2.0) * j
    # hexagonal
    s, i, j = key
    a = delta * SQRT3
    if s == 0:
        return a * (i + 0.5 * j + 0.5), delta * (3 * j + 1) / 2.0
    return a * (i + 0.5 * j + 1.0), delta * (3 * j + 2) / 2.0


def _neighbor_keys(kind: str, key):
    if kind in ("square", "triangular"):
        i, j = key
        return [(i + di, j + dj) for di, dj in lattice_steps(kind)]
    s, i, j = key
    if s == 0:
        return [(1, i, j), (1, i - 1, j), (1, i, j - 1)]
    return [(0, i, j), (0, i + 1, j), (0, i, j + 1)]


def _candidate_keys(kind: str, shape, delta: float):
    x0, x1, y0, y1 = shape.bbox()
    eps = 1e-9 * delta
    keys = []
    if kind == "square":
        for j in range(int(np.floor(y0 / delta)) - 1, int(np.ceil(y1 / delta)) + 2):
            for i in range(int(np.floor(x0 / delta)) - 1, int(np.ceil(x1 / delta)) + 2):
                keys.append((i, j))
    elif kind == "triangular":
        row = delta * SQRT3 / 2.0
        for j in range(int(np.floor(y0 / row)) - 1, int(np.ceil(y1 / row)) + 2):
            ilo = int(np.floor(x0 / delta - 0.5 * j)) - 1
            ihi = int(np.ceil(x1 / delta - 0.5 * j)) + 2
            for i in range(ilo, ihi):
                keys.append((i, j))
    elif kind == "hexagonal":
        a = delta * SQRT3
        row = 1.5 * delta
        for j in range(int(np.floor(y0 / row)) - 2, int(np.ceil(y1 / row)) + 2):
            ilo = int(np.floor(x0 / a - 0.5 * j)) - 2
            ihi = int(np.ceil(x1 / a - 0.5 * j)) + 2
            for i in range(ilo, ihi):
                keys.append((0, i, j))
                keys.append((1, i, j))
    else:
        raise ValueError(f"unknown lattice kind {kind!r}")
    kept = []
    for key in keys:
        x, y = _site_position(kind, key, delta)
        if shape.contains(x, y, eps):
            kept.append(key)
    return kept


def build_domain(kind: str, shape, delta: float) -> LatticeDomain:
    """Discretize a planar shape by the sites of the infinite lattice inside it.

    Boundary sites are the kept sites with at least one full-lattice neighbor
    falling outside the shape.
    """
    if delta <= 0:
        raise ValueError("mesh delta must be positive")
    if isinstance(shape, LatticeRhombus):
        if kind not in ("triangular", "square"):
            raise ValueError("lattice rhombus shapes require a site lattice")
        keys = [(i, j) for j in range(shape.n) for i in range(shape.n)]
    else:
        keys = _candidate_keys(kind, shape, delta)
    if not keys:
        raise EmptyDomainError(
            f"shape {shape!r} contains no {kind} site at mesh {delta}")
    keys = sorted(keys)
    index = {k: n for n, k in enumerate(keys)}
    positions = np.array([_site_position(kind, k, delta) for k in keys])
    neighbor_lists = []
    boundary = np.zeros(len(keys), dtype=bool)
    for n, k in enumerate(keys):
        nbrs = []
        for nk in _neighbor_keys(kind, k):
            m = index.get(nk)
            if m is None:
                boundary[n] = True
            else:
                nbrs.append(m)
        neighbor_lists.append(np.array(sorted(nbrs), dtype=np.int64))
    dom = LatticeDomain(kind, delta, keys, positions, neighbor_lists, boundary,
                        _index=index)
    if kind in ("square", "triangular"):
        dom.grid = _grid_layout(keys)
    return dom


def domain_from_keys(kind: str, keys, delta: float) -> LatticeDomain:
    """Domain from an explicit key set (used for honeycomb face blocks)."""
    keys = sorted(set(keys))
    if not keys:
        raise EmptyDomainError("no sites given")
    index = {k: n for n, k in enumerate(keys)}
    positions = np.array([_site_position(kind, k, delta) for k in keys])
    neighbor_lists = []
    boundary = np.zeros(len(keys), dtype=bool)
    for n, k in enumerate(keys):
        nbrs = []
        for nk in _neighbor_keys(kind, k):
            m = index.get(nk)
            if m is None:
                boundary[n] = True
            else:
                nbrs.append(m)
        neighbor_lists.append(np.array(sorted(nbrs), dtype=np.int64))
    dom = LatticeDomain(kind, delta, keys, positions, neighbor_lists, boundary,
                        _index=index)
    if kind in ("square", "triangular"):
        dom.grid = _grid_layout(keys)
    return dom


def _grid_layout(keys) -> GridLayout:
    ij = np.array(keys, dtype=np.int64)
    i0, j0 = ij.min(axis=0)
    ni, nj = ij.max(axis=0) - (i0, j0) + 1
    mask = np.zeros((ni, nj), dtype=bool)
    site_index = np.full((ni, nj), -1, dtype=np.int64)
    gi, gj = ij[:, 0] - i0, ij[:, 1] - j0
    mask[gi, gj] = True
    site_index[gi, gj] = np.arange(len(keys))
    return GridLayout(int(i0), int(j0), (int(ni), int(nj)), mask, site_index,
                      np.column_stack([gi, gj]))


def grid_structure(kind: str) -> np.ndarray:
    return TRI_STRUCTURE if kind == "triangular" else SQ_STRUCTURE
