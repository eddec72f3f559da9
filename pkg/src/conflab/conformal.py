"""Disc automorphisms, radial slit maps, and the loop-exclusion functional.

The slit map onto the disc minus a radial slit at boundary point b is built
by conjugating the half-plane vertical-slit map sqrt(z^2 - H^2) with the
Cayley map; the normalization derivative-at-zero = exp(-t) fixes the slit
length through H = sqrt(1 - exp(-t)), and these maps form an exact
one-parameter semigroup, which the tests exploit.

The exclusion functional of a map F is the measure of loops in the unit
disc that surround the origin but do not fit inside F(disc).  For slit-type
maps the excluded set is a union of arcs, so the "does not fit" test is a
polyline crossing test against those arcs, estimated over a shared sample
of Brownian-loop hulls with a known window mass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import stats
from .brownian import (hull_contains, hull_raster, outer_boundary,
                       rescale_loop, sample_brownian_bridge)
from .loops import LoopPath, polylines_intersect
from .rng import RngStream


def _cayley(z):
    """Unit disc -> upper half-plane, 1 -> 0, 0 -> i, -1 -> infinity."""
    return 1j * (1.0 - z) / (1.0 + z)


def _cayley_inv(w):
    return (1j - w) / (1j + w)


def _sqrt_slit(w, height):
    """Branch of sqrt(w^2 - H^2) mapping the half-plane onto itself minus
    the vertical slit (0, iH]: principal square roots of the two factors."""
    s = np.sqrt(w - height) * np.sqrt(w + height)
    return np.where(np.imag(s) < 0, -s, s)


@dataclass(frozen=True)
class MobiusDisc:
    """z -> e^{i theta} (z - a) / (1 - conj(a) z)."""

    a: complex = 0.0 + 0.0j
    theta: float = 0.0

    def __post_init__(self):
        if abs(self.a) >= 1.0:
            raise ValueError("pole parameter must satisfy |a| < 1")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.exp(1j * self.theta) * (z - self.a) / (1.0 - np.conj(self.a) * z)

    def inverse(self) -> "MobiusDisc":
        # w = e^{it}(z-a)/(1-conj(a) z)  =>  z = e^{-it}(w + e^{it} a)/(1 + conj(a) e^{-it} w)
        return _MobiusInverse(self)

    @property
    def derivative_at_zero(self) -> complex:
        return np.exp(1j * self.theta) * (1.0 - abs(self.a) ** 2)

    def log_deriv0(self) -> float:
        return float(np.log(abs(self.derivative_at_zero)))

    def excluded_polylines(self):
        return []


@dataclass(frozen=True)
class _MobiusInverse:
    fwd: MobiusDisc

    def __call__(self, w):
        w = np.asarray(w, dtype=complex) * np.exp(-1j * self.fwd.theta)
        return (w + self.fwd.a) / (1.0 + np.conj(self.fwd.a) * w)


@dataclass(frozen=True)
class RadialSlit:
    """Disc onto disc minus the radial slit [(1-x_t) b, b), with
    derivative exp(-t) at the origin."""

    t: float
    boundary_point: complex = 1.0 + 0.0j

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError("slit capacity t must be positive")
        if not np.isclose(abs(self.boundary_point), 1.0):
            raise ValueError("slit must sit on the unit circle")

    @property
    def height(self) -> float:
        return float(np.sqrt(1.0 - np.exp(-self.t)))

    @property
    def shrink(self) -> float:
        # lambda scaling in the half-plane; lambda^2 = derivative at 0
        return float(np.exp(-self.t / 2.0))

    @property
    def slit_length(self) -> float:
        """x_t: the slit is [(1 - x_t) b, b)."""
        h = self.height
        return 2.0 * h / (1.0 + h)

    @property
    def derivative_at_zero(self) -> float:
        return float(np.exp(-self.t))

    def log_deriv0(self) -> float:
        return -self.t

    def __call__(self, z):
        b = self.boundary_point
        z = np.asarray(z, dtype=complex) / b
        w = self.shrink * _cayley(z)
        return b * _cayley_inv(_sqrt_slit(w, self.height))

    def slit_segment(self, n_pts: int = 64) -> np.ndarray:
        """The excluded radial segment, discretized, as an (n,2) polyline."""
        b = self.boundary_point
        s = np.linspace(1.0 - self.slit_length, 1.0, n_pts)
        pts = s * b
        return np.column_stack([pts.real, pts.imag])

    def excluded_polylines(self):
        return [self.slit_segment()]


@dataclass(frozen=True)
class Composition:
    """maps[0] applied last: Composition([F, G]) is F following G."""

    maps: tuple

    def __call__(self, z):
        out = np.asarray(z, dtype=complex)
        for f in reversed(self.maps):
            out = f(out)
        return out

    @property
    def derivative_at_zero(self) -> complex:
        d = 1.0 + 0.0j
        for f in self.maps:
            d = d * f.derivative_at_zero
        return d

    def log_deriv0(self) -> float:
        return float(np.log(abs(self.derivative_at_zero)))

    def excluded_polylines(self):
        """Excluded set of F∘G is excluded(F) union F(excluded(G))."""
        if not self.maps:
            return []
        head, tail = self.maps[0], self.maps[1:]
        out = list(head.excluded_polylines())
        inner = Composition(tail) if len(tail) > 1 else (tail[0] if tail else None)
        if inner is not None:
            for poly in inner.excluded_polylines():
                pts = poly[:, 0] + 1j * poly[:, 1]
                img = head(pts)
                out.append(np.column_stack([img.real, img.imag]))
        return out


def compose(*maps):
    return Composition(tuple(maps))


def numerical_derivative_at_zero(f, eps: float = 1e-6) -> complex:
    return complex((f(eps) - f(-eps)) / (2.0 * eps))


# --- loop sources and the exclusion functional -------------------------------

@dataclass
class HullSample:
    """Shared Monte Carlo sample for exclusion-functional estimates.

    hulls: origin-surrounding hull loops inside the unit disc;
    n_candidates: total candidates drawn from the box-times-window measure;
    mass: that measure's total (so each candidate represents mass/n)."""

    hulls: list
    n_candidates: int
    mass: float


def draw_hull_sample(n_candidates: int, rng: RngStream,
                     t_window=(0.004, 4.0), steps: int = 1024,
                     resolution: int = 220) -> HullSample:
    """Brownian-loop hulls inside the disc that surround the origin.

    Roots are drawn uniformly on the disc itself (loops inside the disc are
    rooted there, so nothing is lost) and durations with the 1/T^2 density
    over the window; the recorded mass is that of the disc-rooted window
    class, area/2 * (1/T_min - 1/T_max) / pi.
    """
    t_min, t_max = t_window
    if not 0 < t_min < t_max:
        raise ValueError("need 0 < T_min < T_max")
    mass = 0.5 * (1.0 / t_min - 1.0 / t_max)  # pi r^2 / (2 pi), r = 1
    gen = rng.generator if hasattr(rng, "generator") else rng
    hulls = []
    for _ in range(n_candidates):
        rad = np.sqrt(gen.random())
        ang = 2.0 * np.pi * gen.random()
        z = rad * np.exp(1j * ang)
        u = gen.random()
        T = 1.0 / (1.0 / t_min - u * (1.0 / t_min - 1.0 / t_max))
        bridge = sample_brownian_bridge(steps, RngStream(int(gen.integers(2**62))))
        loop = rescale_loop(bridge, z, T)
        pts = loop.points
        # cheap rejections first: must stay in the disc and have a chance
        # of wrapping the origin
        if np.abs(pts).max() > 1.0:
            continue
        if np.min(pts.real) > 0 or np.max(pts.real) < 0 or \
           np.min(pts.imag) > 0 or np.max(pts.imag) < 0:
            continue
        h = max(loop.diameter() / resolution, 1e-6)
        filled, lo, _ = hull_raster(pts, h)
        if not hull_contains(filled, lo, h, 0.0 + 0.0j):
            continue
        hulls.append(outer_boundary(loop, h))
    return HullSample(hulls, n_candidates, mass)


def excludes_loop(conformal_map, loop: LoopPath) -> bool:
    """Whether the loop fails to fit inside the map's image of the disc.

    For slit-type images the complement is a union of arcs, so the loop is
    excluded iff it crosses one of them (loops are already inside the disc).
    """
    for poly in conformal_map.excluded_polylines():
        if polylines_intersect(loop.vertices, poly):
            return True
    return False


def estimate_a_functional(sample: HullSample, conformal_map) -> stats.EstimateWithCI:
    """Measure of {loops in the disc around 0 not fitting in the map image}."""
    if sample.n_candidates == 0:
        raise ValueError("empty sample")
    hits = sum(1 for loop in sample.hulls if excludes_loop(conformal_map, loop))
    est = stats.binomial_estimate(hits, sample.n_candidates)
    return stats.EstimateWithCI(est.mean * sample.mass,
                                est.std_error * sample.mass,
                                sample.n_candidates)


def estimate_a_functional_mc(conformal_map, n: int, rng: RngStream,
                             **kwargs) -> stats.EstimateWithCI:
    if n <= 0:
        raise ValueError("need n > 0")
    return estimate_a_functional(draw_hull_sample(n, rng, **kwargs), conformal_map)


def percolation_hull_sample(n_samples: int, rng: RngStream, mesh: float = 1 / 32,
                            min_length: int = 4) -> HullSample:
    """Cross-check loop source: cluster boundaries in a critical sample.

    The per-realization expected number of boundaries in a class is that
    class's discrete loop-measure mass, so mass=1 and n_candidates counts
    realizations.
    """
    from .clusters import find_clusters, trace_outer_boundary
    from .lattice import Disc, build_domain
    from .percolation import sample_site_percolation
    domain = build_domain("triangular", Disc(0, 0, 1), mesh)
    hulls = []
    for k in range(n_samples):
        cfg = sample_site_percolation(domain, 0.5, rng.derive(k))
        for comp in find_clusters(cfg):
            if len(comp) == 1:
                continue
            loop = trace_outer_boundary(comp, domain)
            if loop.length < min_length:
                continue
            v = loop.vertices
            if np.hypot(v[:, 0], v[:, 1]).max() > 1.0:
                continue
            from .loops import crossing_parity
            if crossing_parity(v, (0.0, 0.0)) == 1:
                hulls.append(loop)
    return HullSample(hulls, n_samples, 1.0)
