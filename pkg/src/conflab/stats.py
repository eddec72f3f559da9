"""Shared statistics helpers: interval estimates, regression, counting boxes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special


@dataclass(frozen=True)
class EstimateWithCI:
    mean: float
    std_error: float
    n_samples: int
    confidence_level: float = 0.997  # +-3 sigma by default

    def __post_init__(self):
        if self.std_error < 0:
            raise ValueError("std_error must be >= 0")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if not 0 < self.confidence_level < 1:
            raise ValueError("confidence_level must be in (0,1)")

    @property
    def half_width(self) -> float:
        z = np.sqrt(2.0) * special.erfinv(self.confidence_level)
        return float(z * self.std_error)

    def covers(self, value: float) -> bool:
        return abs(self.mean - value) <= self.half_width

    def z_score(self, value: float) -> float:
        if self.std_error == 0:
            return 0.0 if self.mean == value else np.inf
        return float((self.mean - value) / self.std_error)


def mean_estimate(samples, confidence_level: float = 0.997) -> EstimateWithCI:
    x = np.asarray(samples, dtype=float)
    n = x.size
    se = float(x.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return EstimateWithCI(float(x.mean()), se, n, confidence_level)


def binomial_estimate(successes: int, n: int,
                      confidence_level: float = 0.997) -> EstimateWithCI:
    if n < 1:
        raise ValueError("need n >= 1")
    p = successes / n
    se = float(np.sqrt(p * (1.0 - p) / n))
    return EstimateWithCI(p, se, n, confidence_level)


def linear_fit(x, y):
    """Least-squares line y = a + b x.

    Returns (slope, intercept, slope_std_error, r_squared).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError("need at least two points")
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise ValueError("degenerate abscissae")
    b = np.sum((x - xm) * (y - ym)) / sxx
    a = ym - b * xm
    resid = y - (a + b * x)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - ym) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    dof = max(n - 2, 1)
    se_b = float(np.sqrt(ss_res / dof / sxx))
    return float(b), float(a), se_b, r2


def chi2_sf(stat: float, dof: int) -> float:
    return float(special.gammaincc(dof / 2.0, stat / 2.0))


def chi_square_two_sample(counts_a, counts_b):
    """Homogeneity chi-square for two count histograms over shared bins.

    Bins with fewer than 5 expected entries (combined) are pooled into the
    last kept bin.  Returns (statistic, dof, p_value).
    """
    a = np.asarray(counts_a, dtype=float)
    b = np.asarray(counts_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("histograms must share binning")
    tot = a + b
    order = np.argsort(-tot)
    a, b, tot = a[order], b[order], tot[order]
    # pool sparse tail so the chi2 reference stays valid
    while len(tot) > 1 and tot[-1] < 5:
        a[-2] += a[-1]
        b[-2] += b[-1]
        tot[-2] += tot[-1]
        a, b, tot = a[:-1], b[:-1], tot[:-1]
    na, nb = a.sum(), b.sum()
    if na == 0 or nb == 0:
        raise ValueError("empty sample")
    stat = 0.0
    for j in range(len(tot)):
        ea = tot[j] * na / (na + nb)
        eb = tot[j] * nb / (na + nb)
        if tot[j] > 0:
            stat += (a[j] - ea) ** 2 / ea + (b[j] - eb) ** 2 / eb
    dof = max(len(tot) - 1, 1)
    return float(stat), dof, chi2_sf(float(stat), dof)


def chi_square_gof(observed, expected):
    """Goodness-of-fit chi-square against exact expected counts."""
    o = np.asarray(observed, dtype=float)
    e = np.asarray(expected, dtype=float)
    if o.shape != e.shape:
        raise ValueError("shape mismatch")
    while len(e) > 1 and e[-1] < 5:
        o[-2] += o[-1]
        e[-2] += e[-1]
        o, e = o[:-1], e[:-1]
    stat = float(np.sum((o - e) ** 2 / e))
    dof = max(len(e) - 1, 1)
    return stat, dof, chi2_sf(stat, dof)


def paired_permutation_pvalue(x, y, rng, n_perm: int = 4000):
    """Two-sided paired permutation test of mean(x) == mean(y).

    x[i], y[i] are exchangeable under the null (within-pair swaps), which is
    exactly the situation for resampling diagnostics where both columns are
    conditionally iid given shared per-replica context.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    t_obs = abs(d.mean())
    if np.allclose(d, 0):
        return 1.0
    g = rng.generator if hasattr(rng, "generator") else rng
    signs = g.choice([-1.0, 1.0], size=(n_perm, d.size))
    t_null = np.abs((signs * d).mean(axis=1))
    return float((np.sum(t_null >= t_obs - 1e-15) + 1) / (n_perm + 1))


def box_count_dimension(points, scales=None, n_scales: int = 7) -> EstimateWithCI:
    """Box-counting dimension of a planar point cloud.

    Dyadic boxes are anchored at the lower-left corner of the bounding box;
    the slope of log(count) against log(1/size) over the supplied scales is
    returned with its regression standard error.
    """
    pts = np.asarray(points)
    if pts.ndim == 1 and pts.dtype == complex or np.iscomplexobj(pts):
        pts = np.column_stack([pts.real, pts.imag])
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    if pts.shape[0] < 1000:
        raise ValueError("need at least 1000 points")
    lo = pts.min(axis=0)
    span = float(max(pts.max(axis=0) - lo))
    if span == 0:
        raise ValueError("degenerate point set")
    if scales is None:
        scales = [span / 2**k for k in range(3, 3 + n_scales)]
    scales = sorted(float(s) for s in scales)
    if len(scales) < 4:
        raise ValueError("need at least 4 scales")
    log_inv, log_n = [], []
    for s in scales:
        ij = np.floor((pts - lo) / s).astype(np.int64)
        count = len(np.unique(ij[:, 0] * (2**32) + ij[:, 1]))
        log_inv.append(np.log(1.0 / s))
        log_n.append(np.log(count))
    slope, _, se, _ = linear_fit(log_inv, log_n)
    return EstimateWithCI(slope, se, pts.shape[0])
