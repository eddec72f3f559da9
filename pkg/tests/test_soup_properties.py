"""Distributional properties of the windowed loop soup."""

import numpy as np
import pytest

from conflab import brownian as br
from conflab import cle as cle_mod
from conflab.rng import RngStream
from conflab.stats import chi_square_two_sample


def kept_counts(region, c, window, n, rng, steps=48, band=None):
    out = np.empty(n, dtype=int)
    for k in range(n):
        soup = br.sample_loop_soup(region, c, window, steps, rng.derive(k))
        if band is None:
            out[k] = soup.count
        else:
            lo, hi = band
            out[k] = sum(1 for l in soup.loops if lo <= l.diameter() < hi)
    return out


def test_poisson_variance_over_mean():
    counts = kept_counts(br.DiscRegion(), 2.0, (0.1, 2.0), 4000, RngStream(0))
    ratio = counts.var(ddof=1) / counts.mean()
    assert 0.9 < ratio < 1.1


def test_disjoint_band_counts_uncorrelated():
    region = br.DiscRegion()
    rng = RngStream(1)
    n = 3000
    a = np.empty(n)
    b = np.empty(n)
    for k in range(n):
        soup = br.sample_loop_soup(region, 3.0, (0.05, 2.0), 48, rng.derive(k))
        diams = [l.diameter() for l in soup.loops]
        a[k] = sum(1 for d in diams if 0.2 <= d < 0.5)
        b[k] = sum(1 for d in diams if 0.5 <= d < 1.2)
    corr = np.corrcoef(a, b)[0, 1]
    assert abs(corr) < 3.0 / np.sqrt(n)


def test_scaling_consistency():
    """Doubling space and quadrupling the time window leaves per-class
    expected counts invariant."""
    n = 2500
    small = kept_counts(br.DiscRegion(0, 1.0), 1.5, (0.05, 1.0), n, RngStream(2),
                        band=(0.3, 0.8))
    big = kept_counts(br.DiscRegion(0, 2.0), 1.5, (0.2, 4.0), n, RngStream(3),
                      band=(0.6, 1.6))
    se = np.hypot(small.std(ddof=1), big.std(ddof=1)) / np.sqrt(n)
    assert abs(small.mean() - big.mean()) < 3 * se


@pytest.mark.slow
def test_combined_boundaries_match_summed_intensity():
    """Outer boundaries of two independent soups, combined, match the
    boundaries of the summed-intensity soup in count and largest area."""
    region = br.DiscRegion()
    window = (0.08, 2.0)
    c1, c2 = 0.5, 0.8
    rng = RngStream(4)
    n = 400
    counts_comb, counts_sum = [], []
    area_comb, area_sum = [], []
    for k in range(n):
        s1 = br.sample_loop_soup(region, c1, window, 96, rng.derive(3 * k))
        s2 = br.sample_loop_soup(region, c2, window, 96, rng.derive(3 * k + 1))
        g1 = cle_mod.outermost_boundaries(s1, resolution=110)
        g2 = cle_mod.outermost_boundaries(s2, resolution=110)
        comb = cle_mod.combine_ensembles(g1, g2, resolution=110)
        s12 = br.sample_loop_soup(region, c1 + c2, window, 96, rng.derive(3 * k + 2))
        g12_raw = cle_mod.outermost_boundaries(s12, resolution=110)
        # pass the direct ensemble through the same second hulling so both
        # routes carry the identical raster dilation
        g12 = cle_mod.combine_ensembles(g12_raw,
                                        cle_mod.SimpleLoopConfig(region, []),
                                        resolution=110)
        counts_comb.append(len(comb.loops))
        counts_sum.append(len(g12.loops))
        area_comb.append(max((l.area() for l in comb.loops), default=0.0))
        area_sum.append(max((l.area() for l in g12.loops), default=0.0))
    top = max(max(counts_comb), max(counts_sum)) + 1
    _, _, p_count = chi_square_two_sample(
        np.bincount(counts_comb, minlength=top),
        np.bincount(counts_sum, minlength=top))
    assert p_count > 0.001
    # largest-area distributions agree (two-sample KS)
    from scipy.stats import ks_2samp
    assert ks_2samp(area_comb, area_sum).pvalue > 0.001


@pytest.mark.slow
def test_percolation_loop_source_cross_check():
    """Exclusion functional from percolation boundaries tracks the
    Brownian-hull source up to one overall constant."""
    from conflab import conformal as cf
    perco_sample = cf.percolation_hull_sample(600, RngStream(5), mesh=1 / 24)
    brown_sample = cf.draw_hull_sample(120000, RngStream(6),
                                       t_window=(0.01, 4.0), steps=512,
                                       resolution=150)
    ratios = []
    for t in (0.35, 0.55):
        a_p = cf.estimate_a_functional(perco_sample, cf.RadialSlit(t))
        a_b = cf.estimate_a_functional(brown_sample, cf.RadialSlit(t))
        assert a_p.mean > 0 and a_b.mean > 0
        ratios.append(a_p.mean / a_b.mean)
    # same-constant consistency at coarse tolerance
    assert abs(ratios[0] - ratios[1]) / np.mean(ratios) < 0.5
