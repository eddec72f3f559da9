import numpy as np
import pytest

from conflab import brownian as br
from conflab.loops import surrounds
from conflab.rng import RngStream


def test_rw_loop_mass_square_unit_square():
    loop = [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]
    assert br.rw_loop_mass(loop, "square") == pytest.approx(4.0**-4)


def test_rw_loop_mass_hexagon():
    loop = [(0, 0, 0), (1, -1, 0), (0, -1, 0), (1, -1, -1), (0, 0, -1),
            (1, 0, -1), (0, 0, 0)]
    assert br.rw_loop_mass(loop, "hexagonal") == pytest.approx(3.0**-6)


def test_rw_loop_mass_not_closed():
    with pytest.raises(ValueError):
        br.rw_loop_mass([(0, 0), (1, 0)], "square")


def test_rw_loop_classes_n2():
    classes = br.enumerate_rw_loops("square", 2)
    assert len(classes[2]) == 4
    assert all(m == pytest.approx(4.0**-2) for _, m in classes[2])


def test_rw_loops_odd_absent_on_square():
    classes = br.enumerate_rw_loops("square", 5)
    assert 3 not in classes and 5 not in classes


def test_rw_class_count_cross_check():
    classes = br.enumerate_rw_loops("square", 6)
    for n in (2, 4, 6):
        direct = len(classes[n])
        via_periods = br.rw_loop_class_count_by_periods("square", n)
        assert via_periods == pytest.approx(direct, abs=1e-9)


def test_bridge_endpoints_and_variance():
    rng = RngStream(0)
    n = 4000
    mids = np.empty(n)
    for k in range(n):
        b = br.sample_brownian_bridge(64, rng.derive(k))
        assert b.points[0] == 0 and abs(b.points[-1]) < 1e-12
        mids[k] = b.points[32].real
    var = mids.var(ddof=1)
    se = var * np.sqrt(2.0 / (n - 1))
    assert abs(var - 0.25) < 3 * se


def test_bridge_time_reversal_symmetry():
    rng = RngStream(1)
    n = 3000
    fwd = np.empty(n)
    rev = np.empty(n)
    for k in range(n):
        b = br.sample_brownian_bridge(50, rng.derive(k))
        fwd[k] = abs(b.points[10])
        rev[k] = abs(b.points[40])
    # |gamma(0.2)| and |gamma(0.8)| share a distribution
    assert abs(fwd.mean() - rev.mean()) < 4 * fwd.std(ddof=1) / np.sqrt(n)


def test_rescale_loop():
    b = br.sample_brownian_bridge(32, RngStream(2))
    assert np.allclose(br.rescale_loop(b, 0.0, 1.0).points, b.points)
    big = br.rescale_loop(b, 2.0 + 1j, 4.0)
    assert big.points[0] == pytest.approx(2.0 + 1j)
    assert big.duration == pytest.approx(4.0)
    assert big.diameter() == pytest.approx(2.0 * b.diameter())
    with pytest.raises(ValueError):
        br.rescale_loop(b, 0.0, -1.0)


def test_soup_zero_intensity_empty():
    soup = br.sample_loop_soup(br.DiscRegion(), 0.0, (0.1, 2.0), 32, RngStream(3))
    assert soup.count == 0


def test_soup_window_validation():
    with pytest.raises(ValueError):
        br.sample_loop_soup(br.DiscRegion(), 1.0, (0.0, 2.0), 32, RngStream(3))


def test_soup_loops_stay_inside():
    region = br.DiscRegion()
    soup = br.sample_loop_soup(region, 3.0, (0.05, 2.0), 64, RngStream(4))
    for loop in soup.loops:
        assert region.contains_points(loop.points)


def test_soup_thinning_monotone():
    soup = br.sample_loop_soup(br.DiscRegion(), 4.0, (0.05, 2.0), 32, RngStream(5))
    sub = br.thin_soup(soup, 2.0)
    ids = {id(l) for l in soup.loops}
    assert all(id(l) in ids for l in sub.loops)
    assert sub.count <= soup.count


def test_soup_kept_count_self_consistent():
    """Mean kept count matches an independently estimated window mass."""
    region = br.DiscRegion()
    c, window = 2.0, (0.1, 2.0)
    counts = [br.sample_loop_soup(region, c, window, 48, RngStream(6, k)).count
              for k in range(400)]
    # independent rejection estimate of the in-disc fraction, different seed
    gen = RngStream(99).generator
    m = br.window_mass(region, *window, c=1.0)
    n_ref = 4000
    kept = 0
    x0, x1, y0, y1 = region.bbox()
    for k in range(n_ref):
        z = complex(gen.uniform(x0, x1), gen.uniform(y0, y1))
        u = gen.random()
        T = 1.0 / (1.0 / window[0] - u * (1.0 / window[0] - 1.0 / window[1]))
        loop = br.rescale_loop(br.sample_brownian_bridge(48, RngStream(101, k)), z, T)
        kept += region.contains_points(loop.points)
    expected = c * m * kept / n_ref
    est = np.mean(counts)
    se_est = np.std(counts, ddof=1) / np.sqrt(len(counts))
    se_ref = c * m * np.sqrt(kept / n_ref * (1 - kept / n_ref) / n_ref)
    assert abs(est - expected) < 3 * np.hypot(se_est, se_ref)


def test_hull_of_circle():
    t = np.linspace(0, 2 * np.pi, 400)
    circle = np.cos(t) + 1j * np.sin(t)
    h = 0.01
    loop = br.outer_boundary(br.PlanarPath(np.linspace(0, 1, 400), circle), h)
    assert loop.is_self_avoiding()
    r = np.hypot(loop.vertices[:, 0], loop.vertices[:, 1])
    assert np.all(np.abs(r - 1.0) < 3 * h)
    assert br.hull_area(circle, h) == pytest.approx(np.pi, rel=0.02)


def test_hull_figure_eight_outer_contour():
    t = np.linspace(0, 2 * np.pi, 800)
    eight = np.sin(t) + 1j * np.sin(t) * np.cos(t)  # two lobes meeting at 0
    loop = br.outer_boundary(br.PlanarPath(np.linspace(0, 1, 800), eight), 0.01)
    assert loop.is_self_avoiding()
    # hull encloses both lobes
    assert surrounds(loop, (0.5, 0.01))
    assert surrounds(loop, (-0.5, 0.01))


def test_hull_area_at_least_enclosed():
    b = br.sample_brownian_bridge(2000, RngStream(7))
    h = b.diameter() / 200
    hull = br.outer_boundary(b, h)
    assert hull.is_self_avoiding()
    assert br.hull_area(b.points, h) >= 0.9 * hull.area() - 2 * h
    assert hull.area() > 0


def test_hull_degenerate_raises():
    tiny = np.zeros(10, complex)
    with pytest.raises(ValueError):
        br.outer_boundary(br.PlanarPath(np.linspace(0, 1, 10), tiny), 0.5)
