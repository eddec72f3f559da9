"""Cluster labeling and cluster-boundary loops.

Site clusters on the triangular lattice are viewed as unions of hexagonal
cells; their outer boundaries live on the dual honeycomb edge graph and come
out as self-avoiding LoopPaths.  All boundary bookkeeping happens in exact
integer face coordinates (units: delta/2 horizontally, delta*sqrt(3)/6
vertically), so contour tracing involves no floating-point comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import SQRT3, LatticeDomain
from .loops import LoopPath
from .unionfind import UnionFind


@dataclass
class SiteConfig:
    domain: LatticeDomain
    open_sites: np.ndarray  # bool per site
    p: float

    def __post_init__(self):
        self.open_sites = np.asarray(self.open_sites, dtype=bool)
        if self.open_sites.shape != (self.domain.n_sites,):
            raise ValueError("one boolean per site required")


@dataclass
class BondConfig:
    """Open/closed edges over a site graph (any object with n_sites, edges())."""

    graph: object
    open_edges: np.ndarray  # bool per edge, aligned with graph.edges()
    p: float = 0.5
    q: float = 1.0

    def __post_init__(self):
        self.open_edges = np.asarray(self.open_edges, dtype=bool)
        if self.open_edges.shape != (len(self.graph.edges()),):
            raise ValueError("one boolean per edge required")


def find_clusters(config) -> list[list[int]]:
    """Maximal connected components, deterministically ordered.

    SiteConfig: components of open sites under lattice adjacency.
    BondConfig: components of *all* sites under open-edge connectivity
    (isolated sites count as singleton clusters).
    """
    if isinstance(config, SiteConfig):
        dom = config.domain
        open_sites = np.flatnonzero(config.open_sites)
        if open_sites.size == 0:
            return []
        uf = UnionFind(dom.n_sites)
        is_open = config.open_sites
        for a in open_sites:
            for b in dom.neighbor_lists[a]:
                if b > a and is_open[b]:
                    uf.union(int(a), int(b))
        return uf.components(open_sites)
    if isinstance(config, BondConfig):
        g = config.graph
        uf = UnionFind(g.n_sites)
        edges = g.edges()
        for (a, b) in edges[config.open_edges]:
            uf.union(int(a), int(b))
        return uf.components()
    raise TypeError(f"cannot cluster {type(config).__name__}")


def cluster_count(config) -> int:
    return len(find_clusters(config))


# --- honeycomb dual of the triangular lattice -------------------------------
#
# Face keys: (0, i, j) is the up-triangle on sites {(i,j),(i+1,j),(i,j+1)},
# (1, i, j) the down-triangle on {(i+1,j),(i,j+1),(i+1,j+1)}.

def face_sites(face):
    s, i, j = face
    if s == 0:
        return ((i, j), (i + 1, j), (i, j + 1))
    return ((i + 1, j), (i, j + 1), (i + 1, j + 1))


def face_int_coords(face):
    """Exact integer position: x in units delta/2, y in units delta*sqrt(3)/6."""
    s, i, j = face
    if s == 0:
        return (2 * i + j + 1, 3 * j + 1)
    return (2 * i + j + 2, 3 * j + 2)


def site_int_coords(site):
    i, j = site
    return (2 * i + j, 3 * j)


_DUAL_FACES = {
    (1, 0): lambda i, j: ((0, i, j), (1, i, j - 1)),
    (0, 1): lambda i, j: ((0, i, j), (1, i - 1, j)),
    (1, -1): lambda i, j: ((0, i, j - 1), (1, i, j - 1)),
}


def dual_edge(site_a, site_b):
    """The two honeycomb faces flanking a triangular edge."""
    (ia, ja), (ib, jb) = site_a, site_b
    d = (ib - ia, jb - ja)
    if d in _DUAL_FACES:
        return _DUAL_FACES[d](ia, ja)
    d = (ia - ib, ja - jb)
    if d in _DUAL_FACES:
        return _DUAL_FACES[d](ib, jb)
    raise ValueError(f"sites {site_a} and {site_b} are not neighbors")


def _face_position(face, delta):
    x, y = face_int_coords(face)
    return (0.5 * delta * x, delta * SQRT3 / 6.0 * y)


def boundary_contours(cluster_keys: set) -> list[list]:
    """All boundary contours of a set of triangular sites, as face-key cycles.

    Each contour is directed with the cluster on its left; every honeycomb
    vertex carries at most one incoming and one outgoing contour edge, so the
    walk is a plain successor chase.
    """
    succ = {}
    for s in cluster_keys:
        si, sj = s
        for d in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)):
            t = (si + d[0], sj + d[1])
            if t in cluster_keys:
                continue
            f1, f2 = dual_edge(s, t)
            # direct the edge so that s sits on the left of travel
            p1 = np.array(face_int_coords(f1))
            p2 = np.array(face_int_coords(f2))
            ps = np.array(site_int_coords(s))
            mid = (p1 + p2) / 2.0
            d21 = p2 - p1
            if d21[0] * (ps[1] - mid[1]) - d21[1] * (ps[0] - mid[0]) > 0:
                succ[f1] = f2
            else:
                succ[f2] = f1
    contours = []
    seen = set()
    for start in sorted(succ):
        if start in seen:
            continue
        walk = [start]
        seen.add(start)
        v = succ[start]
        while v != start:
            walk.append(v)
            seen.add(v)
            v = succ[v]
        contours.append(walk)
    return contours


def trace_outer_boundary(cluster_sites, domain: LatticeDomain) -> LoopPath:
    """Outer boundary of a triangular-lattice cluster as a honeycomb loop.

    The outer contour is the one through the lexicographically smallest face
    coordinate; interior hole contours are dropped.
    """
    if domain.kind != "triangular":
        raise ValueError("boundary loops are defined for triangular sites")
    keys = {domain.keys[int(s)] for s in cluster_sites}
    if not keys:
        raise ValueError("empty cluster")
    contours = boundary_contours(keys)
    outer = min(contours, key=lambda c: min(face_int_coords(f) for f in c))
    verts = [_face_position(f, domain.delta) for f in outer]
    verts.append(verts[0])
    return LoopPath(np.array(verts), keys=tuple(outer) + (outer[0],))


def loop_adjacent_hexagons(loop: LoopPath) -> set:
    """Triangular sites (hexagonal cells) touching the loop, inside and out."""
    if loop.keys is None:
        raise ValueError("loop must carry honeycomb face keys")
    cells = set()
    for f in loop.keys[:-1]:
        cells.update(face_sites(f))
    return cells
