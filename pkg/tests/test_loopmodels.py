import numpy as np
import pytest

from conflab import loopmodels as lm
from conflab.loopmodels import (HEX_CONNECTIVE, LoopConfig, PlaquetteChain,
                                enumerate_sap, enumerate_saw,
                                estimate_connective_constant, exact_on_partition,
                                hexagon_faces, honeycomb_face_block,
                                nienhuis_theta_c, on_weight, sap_mass)
from conflab.rng import RngStream


def test_saw_square_small_counts():
    t = enumerate_saw("square", 6)
    assert t.walk_counts[:4] == [4, 12, 36, 100]


def test_saw_hexagonal_small_counts():
    t = enumerate_saw("hexagonal", 8)
    assert t.walk_counts[0] == 3
    assert t.walk_counts[:8] == [3, 6, 12, 24, 48, 90, 174, 336]


def test_sap_square():
    t = enumerate_saw("square", 6)
    assert t.polygon_counts[3] == 4          # the four unit squares at the origin
    assert t.polygon_counts[:3] == [0, 0, 0]


def test_sap_hexagonal_girth():
    polys = enumerate_sap("hexagonal", 8)
    assert polys[:5] == [0, 0, 0, 0, 0]      # girth 6
    assert polys[5] == 3                     # hexagons incident to the origin


def test_saw_budget_refused():
    with pytest.raises(ValueError):
        enumerate_saw("square", 17)


def test_submultiplicativity_exact():
    for lattice, nmax in [("square", 10), ("hexagonal", 14)]:
        assert enumerate_saw(lattice, nmax).check_submultiplicative()


def test_root_estimate_monotone_and_ratio_below_root():
    t = enumerate_saw("hexagonal", 14)
    roots = [t.walk_counts[k] ** (1 / (k + 1)) for k in range(t.n_max)]
    assert all(roots[k + 1] <= roots[k] + 1e-12 for k in range(len(roots) - 1))
    est = estimate_connective_constant(t)
    assert est.ratio <= est.root


def test_square_root_estimate_range():
    t = enumerate_saw("square", 12)
    est = estimate_connective_constant(t)
    assert 2.5 <= est.root <= 3.0
    assert est.root >= est.ratio


def test_sap_mass():
    growth = HEX_CONNECTIVE
    assert sap_mass(6, growth) == pytest.approx((2 + np.sqrt(2)) ** -3)
    assert sap_mass(8, growth) < sap_mass(6, growth)
    with pytest.raises(ValueError):
        sap_mass(6, 0.9)


def test_nienhuis_values():
    assert nienhuis_theta_c(2.0) == pytest.approx(1 / np.sqrt(2))
    assert nienhuis_theta_c(1.0) == pytest.approx(1 / np.sqrt(3))
    assert 1.0 / nienhuis_theta_c(0.0) == pytest.approx(HEX_CONNECTIVE)
    with pytest.raises(ValueError):
        nienhuis_theta_c(2.5)


def test_honeycomb_face_block_geometry():
    dom = honeycomb_face_block(1, 1)
    assert dom.n_sites == 6
    assert len(dom.edges()) == 6
    assert len(hexagon_faces(dom)) == 1
    dom2 = honeycomb_face_block(2, 1)
    assert dom2.n_sites == 10
    assert len(dom2.edges()) == 11
    assert len(hexagon_faces(dom2)) == 2


def test_on_weight_examples():
    dom = honeycomb_face_block(2, 1)
    empty = LoopConfig(dom, np.zeros(11, bool))
    assert on_weight(empty, 1.0, 0.5) == 1.0
    faces = hexagon_faces(dom)
    one = LoopConfig(dom, lm._face_subset_config(dom, faces, [1, 0]))
    assert one.loop_count() == 1 and one.total_length() == 6
    assert on_weight(one, 1.0, 0.5) == pytest.approx(2.0**-6)
    both = LoopConfig(dom, lm._face_subset_config(dom, faces, [1, 1]))
    # two adjacent faces XOR into the single outer 10-cycle
    assert both.loop_count() == 1 and both.total_length() == 10
    # disjoint faces multiply: use a wider block
    dom3 = honeycomb_face_block(3, 1)
    faces3 = hexagon_faces(dom3)
    two = LoopConfig(dom3, lm._face_subset_config(dom3, faces3, [1, 0, 1]))
    assert two.loop_count() == 2 and two.total_length() == 12
    assert on_weight(two, 2.0, 0.3) == pytest.approx(4 * 0.3**12)


def test_on_weight_rejects_invalid():
    dom = honeycomb_face_block(1, 1)
    bad = np.zeros(6, bool)
    bad[0] = True
    with pytest.raises(ValueError):
        on_weight(LoopConfig(dom, bad), 1.0, 0.5)


def test_exact_partition_single_hexagon():
    dom = honeycomb_face_block(1, 1)
    n, theta = 1.7, 0.4
    assert exact_on_partition(dom, n, theta) == pytest.approx(1 + n * theta**6)


def test_exact_partition_two_hexagons():
    dom = honeycomb_face_block(2, 1)
    n, theta = 1.3, 0.45
    expected = 1 + 2 * n * theta**6 + n * theta**10
    assert exact_on_partition(dom, n, theta) == pytest.approx(expected)


def test_o1_matches_ising_contours():
    """Loop-gas Z at N=1 equals the fixed-boundary spin sum with exp(-beta)=theta."""
    theta = 0.37
    # patch of two adjacent interior triangular sites, boundary all fixed:
    # configurations: ++ (H=0), two single flips (H=6), -- (H=10)
    spin_z = 1 + 2 * theta**6 + theta**10
    dom = honeycomb_face_block(2, 1)
    assert exact_on_partition(dom, 1.0, theta) == pytest.approx(spin_z)
    # three-in-a-row patch
    theta = 0.5
    spin_z3 = (1            # +++
               + 3 * theta**6          # one flip: contour length 6
               + 2 * theta**10         # two adjacent flips
               + theta**12             # two non-adjacent flips
               + theta**14)            # all three flipped
    dom3 = honeycomb_face_block(3, 1)
    assert exact_on_partition(dom3, 1.0, theta) == pytest.approx(spin_z3)


def test_plaquette_chain_matches_two_state_exact():
    dom = honeycomb_face_block(1, 1)
    n, theta = 1.0, 0.8
    chain = PlaquetteChain(dom, n, theta, RngStream(0))
    hits = []
    for _ in range(4000):
        chain.step()
        hits.append(chain.config.total_length() > 0)
    p_exact = n * theta**6 / (1 + n * theta**6)
    est = np.mean(hits)
    se = np.std(hits, ddof=1) / np.sqrt(len(hits))
    assert abs(est - p_exact) < 3 * se + 0.01


def test_plaquette_chain_theta_to_zero():
    dom = honeycomb_face_block(2, 1)
    cfg = lm.sample_on_model(dom, 1.0, 0.01, 200, RngStream(1))
    assert cfg.total_length() == 0


def test_plaquette_kernel_reversible():
    for shape, n, theta in [((1, 1), 1.5, 0.6), ((2, 1), 0.8, 0.5)]:
        dom = honeycomb_face_block(*shape)
        states, pi, P = lm.plaquette_transition_matrix(dom, n, theta)
        assert np.allclose(P.sum(axis=1), 1.0, atol=1e-12)
        assert np.max(np.abs(pi @ P - pi)) < 1e-12
        flux = pi[:, None] * P
        assert np.max(np.abs(flux - flux.T)) < 1e-12


def test_two_hexagon_distribution_tv():
    dom = honeycomb_face_block(2, 1)
    n, theta = 1.0, 0.7
    states, pi, _ = lm.plaquette_transition_matrix(dom, n, theta)
    chain = PlaquetteChain(dom, n, theta, RngStream(2))
    counts = np.zeros(len(states))
    sweeps = 4000
    for _ in range(sweeps):
        chain.run(1)
        for s, st in enumerate(states):
            if np.array_equal(st.edge_set, chain.config.edge_set):
                counts[s] += 1
                break
    tv = 0.5 * np.abs(counts / sweeps - pi).sum()
    assert tv < 0.05


def test_csv_export(tmp_path):
    t = enumerate_saw("hexagonal", 8)
    out = tmp_path / "counts.csv"
    t.to_csv(out)
    text = out.read_text()
    assert "unoriented" in text
    assert "3,6" not in text.splitlines()[0]
    assert text.splitlines()[1] == "N,A_N,Aprime_N"
