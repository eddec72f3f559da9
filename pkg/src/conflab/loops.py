"""Closed planar loops and the geometric predicates the samplers share.

A LoopPath stores its raw representation with the first vertex repeated at
the end; two loops are equal when one cyclic shift (optionally a reversal)
matches the other.  Lattice loops additionally carry exact integer keys so
canonicalization and adjacency counting never touch floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class LoopPath:
    vertices: np.ndarray                 # (N+1, 2), first row == last row
    keys: tuple | None = None            # optional exact labels, length N+1
    closed: bool = True
    _canon: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 2:
            raise ValueError("vertices must be an (N+1, 2) array")
        if not np.allclose(self.vertices[0], self.vertices[-1]):
            raise ValueError("raw representation must repeat the first vertex")
        if self.length < 1:
            raise ValueError("empty loop")

    @property
    def length(self) -> int:
        """Edge count N."""
        return self.vertices.shape[0] - 1

    def cycle(self) -> np.ndarray:
        """Vertices without the closing duplicate."""
        return self.vertices[:-1]

    def cycle_keys(self):
        return None if self.keys is None else tuple(self.keys[:-1])

    def is_self_avoiding(self) -> bool:
        cyc = self.cycle_keys()
        if cyc is None:
            cyc = tuple(map(tuple, np.round(self.cycle(), 12)))
        return len(set(cyc)) == len(cyc)

    def canonical(self, identify_reversal: bool = True) -> tuple:
        """Cyclic-shift (and optionally reversal) invariant fingerprint."""
        if self._canon is not None:
            return self._canon
        cyc = self.cycle_keys()
        if cyc is None:
            cyc = tuple(map(tuple, np.round(self.cycle(), 12)))
        variants = [cyc]
        if identify_reversal:
            variants.append(tuple(reversed(cyc)))
        best = None
        for var in variants:
            k = min(range(len(var)), key=lambda s: var[s:] + var[:s])
            rot = var[k:] + var[:k]
            if best is None or rot < best:
                best = rot
        self._canon = best
        return best

    def translated(self, dx: float, dy: float) -> "LoopPath":
        return LoopPath(self.vertices + np.array([dx, dy]), keys=None)

    def diameter(self) -> float:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(np.hypot(*(hi - lo)))

    def area(self) -> float:
        """Absolute enclosed (shoelace) area."""
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return abs(float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1])) / 2.0)

    def bbox(self):
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return lo[0], hi[0], lo[1], hi[1]


class PointOnLoopError(ValueError):
    pass


def point_segment_distance(z, p, q) -> float:
    z = np.asarray(z, dtype=float)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = q - p
    denom = float(d @ d)
    if denom == 0.0:
        return float(np.hypot(*(z - p)))
    t = np.clip(float((z - p) @ d) / denom, 0.0, 1.0)
    return float(np.hypot(*(z - (p + t * d))))


def point_on_polyline(z, vertices, tol) -> bool:
    v = np.asarray(vertices, dtype=float)
    p, q = v[:-1], v[1:]
    d = q - p
    zz = np.asarray(z, dtype=float)
    denom = np.einsum("ij,ij->i", d, d)
    denom = np.where(denom == 0, 1.0, denom)
    t = np.clip(np.einsum("ij,ij->i", zz - p, d) / denom, 0.0, 1.0)
    proj = p + t[:, None] * d
    return bool(np.min(np.hypot(*(zz - proj).T)) <= tol)


def crossing_parity(vertices, z) -> int:
    """Even-odd crossing number parity of the loop around z (ray up)."""
    v = np.asarray(vertices, dtype=float)
    x, y = float(z[0]), float(z[1])
    px, py = v[:-1, 0], v[:-1, 1]
    qx, qy = v[1:, 0], v[1:, 1]
    straddle = (py > y) != (qy > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xi = px + (y - py) * (qx - px) / (qy - py)
    hits = straddle & (x < xi)
    return int(np.count_nonzero(hits) % 2)


def surrounds(loop: LoopPath, z) -> bool:
    """True iff the closed loop winds an odd number of times around z."""
    if not loop.closed:
        raise ValueError("loop must be closed")
    scale = max(loop.diameter(), 1e-300)
    if point_on_polyline(z, loop.vertices, 1e-12 * scale):
        raise PointOnLoopError(f"point {z} lies on the loop")
    return crossing_parity(loop.vertices, z) == 1


def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def segments_properly_cross(a, b, c, d) -> bool:
    d1 = _cross(a[0], a[1], b[0], b[1], c[0], c[1])
    d2 = _cross(a[0], a[1], b[0], b[1], d[0], d[1])
    d3 = _cross(c[0], c[1], d[0], d[1], a[0], a[1])
    d4 = _cross(c[0], c[1], d[0], d[1], b[0], b[1])
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def polylines_intersect(pv, qv, proper_only: bool = False) -> bool:
    """Whether two polylines share a point (touching counts unless proper_only).

    Exact sign tests on the given coordinates; no epsilon inflation.  Chunked
    broadcasting keeps memory bounded for long polylines.
    """
    P = np.asarray(pv, dtype=float)
    Q = np.asarray(qv, dtype=float)
    plo, phi = P.min(axis=0), P.max(axis=0)
    qlo, qhi = Q.min(axis=0), Q.max(axis=0)
    if np.any(phi < qlo) or np.any(qhi < plo):
        return False
    a, b = P[:-1], P[1:]
    c, d = Q[:-1], Q[1:]
    # prune P segments whose bbox misses Q's bbox
    seg_lo = np.minimum(a, b)
    seg_hi = np.maximum(a, b)
    alive = ~(np.any(seg_hi < qlo, axis=1) | np.any(seg_lo > qhi, axis=1))
    if not np.any(alive):
        return False
    a, b = a[alive], b[alive]
    qseg_lo = np.minimum(c, d)
    qseg_hi = np.maximum(c, d)
    chunk = max(1, int(2e6 // max(len(c), 1)))
    for s in range(0, len(a), chunk):
        aa, bb = a[s:s + chunk], b[s:s + chunk]
        lo = np.minimum(aa, bb)[:, None, :]
        hi = np.maximum(aa, bb)[:, None, :]
        box = ~np.any((hi < qseg_lo[None]) | (lo > qseg_hi[None]), axis=2)
        if not np.any(box):
            continue
        ii, jj = np.nonzero(box)
        A, B = aa[ii], bb[ii]
        C, D = c[jj], d[jj]
        d1 = _cross(A[:, 0], A[:, 1], B[:, 0], B[:, 1], C[:, 0], C[:, 1])
        d2 = _cross(A[:, 0], A[:, 1], B[:, 0], B[:, 1], D[:, 0], D[:, 1])
        d3 = _cross(C[:, 0], C[:, 1], D[:, 0], D[:, 1], A[:, 0], A[:, 1])
        d4 = _cross(C[:, 0], C[:, 1], D[:, 0], D[:, 1], B[:, 0], B[:, 1])
        if np.any((d1 * d2 < 0) & (d3 * d4 < 0)):
            return True
        if proper_only:
            continue
        touch = (d1 == 0) | (d2 == 0) | (d3 == 0) | (d4 == 0)
        if np.any(touch):
            for k in np.flatnonzero(touch):
                if _touching(A[k], B[k], C[k], D[k]):
                    return True
    return False


def _on_segment(p, q, r) -> bool:
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def _touching(a, b, c, d) -> bool:
    d1 = _cross(a[0], a[1], b[0], b[1], c[0], c[1])
    d2 = _cross(a[0], a[1], b[0], b[1], d[0], d[1])
    d3 = _cross(c[0], c[1], d[0], d[1], a[0], a[1])
    d4 = _cross(c[0], c[1], d[0], d[1], b[0], b[1])
    if d1 == 0 and _on_segment(a, b, c):
        return True
    if d2 == 0 and _on_segment(a, b, d):
        return True
    if d3 == 0 and _on_segment(c, d, a):
        return True
    if d4 == 0 and _on_segment(c, d, b):
        return True
    return False
