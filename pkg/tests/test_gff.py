import numpy as np
import pytest

from conflab import gff
from conflab.lattice import Rect, build_domain
from conflab.rng import RngStream


@pytest.fixture(scope="module")
def rect10():
    # 12x12 sites -> 10x10 interior
    return build_domain("square", Rect(0, 11, 0, 11), 1.0)


@pytest.fixture(scope="module")
def green10(rect10):
    return gff.green_matrix(rect10)


def test_green_path_graph_example():
    dom = build_domain("square", Rect(0, 2, 0, 0), 1.0)
    mid = dom.index_of((1, 0))
    green = gff.green_matrix(dom, interior=np.array([mid]))
    assert green.matrix.shape == (1, 1)
    assert green.matrix[0, 0] == pytest.approx(0.5)


def test_green_symmetry_and_positivity(green10):
    g = green10.matrix
    assert np.max(np.abs(g - g.T)) < 1e-12
    w = np.linalg.eigvalsh(g)
    assert w.min() > 0


def test_green_domain_monotonicity():
    small = build_domain("square", Rect(0, 7, 0, 7), 1.0)
    big = build_domain("square", Rect(-2, 9, -2, 9), 1.0)
    gs = gff.green_matrix(small)
    gb = gff.green_matrix(big)
    for key in [(3, 3), (4, 2), (2, 5)]:
        s_small = small.index_of(key)
        s_big = big.index_of(key)
        d_small = gs.matrix[gs.index_of_site(s_small), gs.index_of_site(s_small)]
        d_big = gb.matrix[gb.index_of_site(s_big), gb.index_of_site(s_big)]
        assert d_big > d_small


def test_dgff_moments_match_green(green10):
    n = 4000
    samples = gff.sample_dgff_batch(green10, n, RngStream(0))
    probe = [(0, 0), (0, 11), (17, 44), (5, 80)]
    for i, j in probe:
        emp = np.mean(samples[:, i] * samples[:, j])
        exact = green10.matrix[i, j]
        var_term = green10.matrix[i, i] * green10.matrix[j, j] + exact**2
        se = np.sqrt(var_term / n)
        assert abs(emp - exact) < 3.5 * se
    means = samples.mean(axis=0)
    ses = samples.std(axis=0, ddof=1) / np.sqrt(n)
    assert np.all(np.abs(means) < 4 * ses + 1e-12)


def test_energy_examples(rect10):
    zero = np.zeros(rect10.n_sites)
    assert gff.dirichlet_energy(rect10, zero) == 0.0
    spike = np.zeros(rect10.n_sites)
    interior = np.flatnonzero(~rect10.boundary_mask)
    spike[interior[0]] = 1.0
    assert gff.dirichlet_energy(rect10, spike) == pytest.approx(4.0)
    bad = np.ones(rect10.n_sites)
    with pytest.raises(ValueError):
        gff.dirichlet_energy(rect10, bad)


def test_energy_lattice_symmetry(rect10):
    gen = RngStream(1).generator
    vals = np.zeros(rect10.n_sites)
    interior = np.flatnonzero(~rect10.boundary_mask)
    vals[interior] = gen.normal(size=len(interior))
    # reflect i -> 11 - i
    reflected = np.zeros_like(vals)
    for s, key in enumerate(rect10.keys):
        i, j = key
        reflected[rect10.index_of((11 - i, j))] = vals[s]
    assert gff.dirichlet_energy(rect10, reflected) == pytest.approx(
        gff.dirichlet_energy(rect10, vals))


def test_energy_covariance_duality(green10, rect10):
    """Var(sum f h) = f^T G f for fixed coefficients f."""
    gen = RngStream(2).generator
    f = gen.normal(size=len(green10.interior))
    n = 4000
    samples = gff.sample_dgff_batch(green10, n, RngStream(3))
    proj = samples @ f
    var = proj.var(ddof=1)
    exact = f @ green10.matrix @ f
    se = exact * np.sqrt(2.0 / (n - 1))
    assert abs(var - exact) < 3 * se


def test_markov_decomposition(rect10, green10):
    # vertical cut through the interior column i=6
    cut = [rect10.index_of((6, j)) for j in range(1, 11)]
    field = gff.sample_dgff(green10, RngStream(4))
    harmonic, sides, recon = gff.markov_decompose(field, cut)
    assert len(sides) == 2
    assert np.max(np.abs(recon - field.values)) < 1e-12
    # harmonic part interpolates the cut values
    for s in cut:
        assert harmonic[s] == pytest.approx(field.values[s], abs=1e-12)


def test_markov_zero_field(rect10, green10):
    field = gff.FieldSample(rect10, np.zeros(rect10.n_sites))
    cut = [rect10.index_of((6, j)) for j in range(1, 11)]
    harmonic, sides, recon = gff.markov_decompose(field, cut)
    assert np.all(harmonic == 0)
    assert all(np.all(s == 0) for s in sides)


def test_markov_nonseparating_cut_raises(rect10, green10):
    field = gff.sample_dgff(green10, RngStream(5))
    with pytest.raises(ValueError):
        gff.markov_decompose(field, [rect10.index_of((6, 3))])


def test_markov_cross_covariance_vanishes(rect10, green10):
    cut = [rect10.index_of((6, j)) for j in range(1, 11)]
    n = 1200
    left_site = rect10.index_of((3, 5))
    right_site = rect10.index_of((9, 5))
    prods_sides = np.empty(n)
    prods_harm = np.empty(n)
    for k in range(n):
        field = gff.sample_dgff(green10, RngStream(6, k))
        harmonic, sides, _ = gff.markov_decompose(field, cut)
        # the sides have disjoint supports, so summing picks the right one
        a = sides[0][left_site] + sides[1][left_site]
        b = sides[0][right_site] + sides[1][right_site]
        prods_sides[k] = a * b
        prods_harm[k] = harmonic[left_site] * a
    for prods in (prods_sides, prods_harm):
        se = prods.std(ddof=1) / np.sqrt(n)
        assert abs(prods.mean()) < 3 * se


def test_green_hitting_oracle():
    dom = build_domain("square", Rect(0, 7, 0, 7), 1.0)
    green = gff.green_matrix(dom)
    x = dom.index_of((3, 3))
    y = dom.index_of((4, 4))
    est, se = gff.green_hitting_estimate(dom, x, y, 3000, RngStream(7))
    exact = green.matrix[green.index_of_site(x), green.index_of_site(y)] * 4.0
    assert abs(est - exact) < 3 * se


def test_level_line_runs_and_exits():
    dom = build_domain("square", Rect(0, 15, 0, 15), 1.0)
    green = gff.green_matrix(dom)
    path = gff.level_line_explore(dom, 3.0, RngStream(8), green)
    assert len(path) > 3
    # simple in the edge sense: no repeated consecutive pair
    edges = {(tuple(a), tuple(b)) for a, b in zip(path[:-1], path[1:])}
    assert len(edges) == len(path) - 1


def test_level_line_large_gap_hugs_vertical():
    dom = build_domain("square", Rect(0, 15, 0, 15), 1.0)
    green = gff.green_matrix(dom)
    disp = []
    for k in range(20):
        path = gff.level_line_explore(dom, 500.0, RngStream(9, k), green)
        disp.append(abs(path[-1][0] - path[0][0]))
    assert np.mean(disp) < 1.0


def test_level_line_driving_diagnostic_reports():
    dom = build_domain("square", Rect(0, 13, 0, 13), 1.0)
    rep = gff.level_line_driving_diagnostic(dom, 3.0, 12, RngStream(11))
    assert rep["kappa_hat"] > 0
    assert rep["n"] == 12
    sweep = gff.level_line_gap_sweep(dom, [1.5, 3.0], 8, RngStream(12))
    assert sweep["best_gap"] in (1.5, 3.0)
