import numpy as np
import pytest

from conflab import percolation as perco
from conflab.clusters import SiteConfig, find_clusters
from conflab.lattice import LatticeRhombus, Rect, build_domain
from conflab.loops import polylines_intersect
from conflab.rng import RngStream


@pytest.fixture(scope="module")
def rhombus16():
    return build_domain("triangular", LatticeRhombus(16), 1.0)


def test_sample_extremes(rhombus16):
    rng = RngStream(0)
    assert perco.sample_site_percolation(rhombus16, 1.0, rng).open_sites.all()
    assert not perco.sample_site_percolation(rhombus16, 0.0, rng).open_sites.any()


def test_open_fraction_half(rhombus16):
    rng = RngStream(1)
    counts = [perco.sample_site_percolation(rhombus16, 0.5, rng.derive(k)).open_sites.mean()
              for k in range(200)]
    est = np.mean(counts)
    se = np.std(counts, ddof=1) / np.sqrt(len(counts))
    assert abs(est - 0.5) < 3 * se + 1e-9


def test_crossing_p1_exact(rhombus16):
    a, b = perco.rhombus_arcs(rhombus16, "lr")
    est = perco.estimate_crossing(rhombus16, 1.0, a, b, 50, RngStream(2))
    assert est.mean == 1.0


def test_crossing_arcs_must_be_disjoint(rhombus16):
    a, _ = perco.rhombus_arcs(rhombus16, "lr")
    with pytest.raises(ValueError):
        perco.estimate_crossing(rhombus16, 0.5, a, a, 10, RngStream(0))


def test_grid_crossing_matches_reference(rhombus16):
    """ndimage fast path against the explicit union-find decision."""
    a, b = perco.rhombus_arcs(rhombus16, "lr")
    rng = RngStream(3)
    for k in range(25):
        cfg = perco.sample_site_percolation(rhombus16, 0.5, rng.derive(k))
        grid = rhombus16.grid
        from scipy import ndimage
        from conflab.lattice import grid_structure
        field = np.zeros(grid.shape, bool)
        field[grid.ij[:, 0], grid.ij[:, 1]] = cfg.open_sites
        labels, _ = ndimage.label(field, structure=grid_structure("triangular"))
        la = labels[grid.ij[a, 0], grid.ij[a, 1]]
        lb = labels[grid.ij[b, 0], grid.ij[b, 1]]
        fast = bool(np.intersect1d(la[la > 0], lb[lb > 0]).size)
        assert fast == perco.crossing_occurs(cfg, a, b)


def test_crossing_complementarity(rhombus16):
    """Exactly one of [open left-right] / [closed bottom-top] on the rhombus."""
    lr = perco.rhombus_arcs(rhombus16, "lr")
    bt = perco.rhombus_arcs(rhombus16, "bt")
    rng = RngStream(4)
    for k in range(100):
        cfg = perco.sample_site_percolation(rhombus16, 0.5, rng.derive(k))
        open_cross = perco.crossing_occurs(cfg, *lr, color="open")
        closed_cross = perco.crossing_occurs(cfg, *bt, color="closed")
        assert open_cross != closed_cross


def test_rhombus_crossing_half(rhombus16):
    a, b = perco.rhombus_arcs(rhombus16, "lr")
    est = perco.estimate_crossing(rhombus16, 0.5, a, b, 2000, RngStream(5))
    assert est.covers(0.5)


def test_single_hexagon_mass_translation():
    dom = build_domain("triangular", LatticeRhombus(12), 1.0)
    from conflab.clusters import trace_outer_boundary
    m1 = perco.perco_loop_mass(trace_outer_boundary([dom.index_of((4, 4))], dom))
    m2 = perco.perco_loop_mass(trace_outer_boundary([dom.index_of((7, 6))], dom))
    assert m1 == m2 == 2.0**-7


def test_cluster_loops_all_open(rhombus16):
    loops = perco.sample_cluster_loops(rhombus16, RngStream(0), p=1.0)
    assert len(loops) == 1


def test_cluster_loops_pairwise_noncrossing(rhombus16):
    loops = perco.sample_cluster_loops(rhombus16, RngStream(6))
    assert all(l.is_self_avoiding() for l in loops)
    for i in range(len(loops)):
        for j in range(i + 1, len(loops)):
            assert not polylines_intersect(loops[i].vertices, loops[j].vertices,
                                           proper_only=True)


def test_isolated_counter_matches_loop_census(rhombus16):
    eligible, n_elig = perco.isolated_site_stats(rhombus16)
    assert n_elig == 14 * 14
    rng = RngStream(7)
    for k in range(20):
        cfg = perco.sample_site_percolation(rhombus16, 0.5, rng.derive(k))
        fast = perco.count_isolated_open(cfg, eligible)
        slow = 0
        for comp in find_clusters(cfg):
            if len(comp) == 1 and eligible[comp[0]]:
                slow += 1
        assert fast == slow


def test_isolated_rate_matches_mass(rhombus16):
    eligible, n_elig = perco.isolated_site_stats(rhombus16)
    rng = RngStream(8)
    n = 3000
    counts = np.array([perco.count_isolated_open(
        perco.sample_site_percolation(rhombus16, 0.5, rng.derive(k)), eligible)
        for k in range(n)], float)
    per_site = counts / n_elig
    se = per_site.std(ddof=1) / np.sqrt(n)
    assert abs(per_site.mean() - 2.0**-7) < 3 * se


def test_bigger_clusters_rarer(rhombus16):
    """Cluster count at diameter >= r is nonincreasing in r, per sample."""
    rng = RngStream(9)
    cfg = perco.sample_site_percolation(rhombus16, 0.5, rng)
    comps = find_clusters(cfg)
    pos = rhombus16.positions
    diams = []
    for c in comps:
        pts = pos[c]
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        diams.append(float(np.hypot(*(hi - lo))))
    for r1, r2 in [(1, 2), (2, 4), (4, 8)]:
        assert sum(d >= r1 for d in diams) >= sum(d >= r2 for d in diams)


def test_square_bond_percolation_shapes():
    dom = build_domain("square", Rect(0, 3, 0, 3), 1.0)
    cfg = perco.sample_bond_percolation(dom, 0.5, RngStream(10))
    assert cfg.open_edges.shape == (len(dom.edges()),)
    comps = find_clusters(cfg)
    assert sum(len(c) for c in comps) == dom.n_sites
