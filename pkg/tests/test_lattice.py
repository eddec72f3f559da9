import numpy as np
import pytest

from conflab import lattice
from conflab.lattice import (Disc, EmptyDomainError, HalfPlaneStrip,
                             LatticeRhombus, Rect, build_domain)


def test_square_unit_square_site_count():
    dom = build_domain("square", Rect(0, 1, 0, 1), 0.5)
    assert dom.n_sites == 9


def test_adjacency_symmetric():
    for kind, delta in [("square", 0.25), ("triangular", 0.25), ("hexagonal", 0.125)]:
        dom = build_domain(kind, Rect(0, 1, 0, 1), delta)
        for a, nbrs in enumerate(dom.neighbor_lists):
            for b in nbrs:
                assert a in dom.neighbor_lists[b]


@pytest.mark.parametrize("kind,coord", [("square", 4), ("triangular", 6),
                                        ("hexagonal", 3)])
def test_interior_coordination(kind, coord):
    dom = build_domain(kind, Rect(0, 1, 0, 1), 1 / 8)
    interior = ~dom.boundary_mask
    assert interior.any()
    for s in np.flatnonzero(interior):
        assert len(dom.neighbor_lists[s]) == coord


def test_hexagonal_nearest_neighbor_distance():
    dom = build_domain("hexagonal", Rect(0, 1, 0, 1), 1 / 8)
    for a, nbrs in enumerate(dom.neighbor_lists):
        for b in nbrs:
            d = np.hypot(*(dom.positions[a] - dom.positions[b]))
            assert d == pytest.approx(1 / 8, rel=1e-9)


def test_boundary_subset_and_definition():
    dom = build_domain("triangular", Disc(0, 0, 1), 0.2)
    assert set(dom.boundary_sites) <= set(range(dom.n_sites))
    for s in range(dom.n_sites):
        missing = len(dom.neighbor_lists[s]) < dom.degree()
        assert missing == bool(dom.boundary_mask[s])


def test_empty_domain_raises():
    with pytest.raises(EmptyDomainError):
        build_domain("square", Rect(0.3, 0.4, 0.3, 0.4), 0.5)


def test_halfplane_strip_is_rect_on_axis():
    dom = build_domain("triangular", HalfPlaneStrip(-1, 1, 0.5), 0.25)
    assert dom.positions[:, 1].min() >= -1e-12
    assert dom.positions[:, 1].max() <= 0.5 + 1e-12


def test_rhombus_shape():
    dom = build_domain("triangular", LatticeRhombus(5), 1.0)
    assert dom.n_sites == 25
    ij = np.array(dom.keys)
    assert ij.min() == 0 and ij.max() == 4


def test_dual_kind():
    assert build_domain("square", Rect(0, 1, 0, 1), 0.5).dual_kind == "square"
    assert build_domain("triangular", Rect(0, 1, 0, 1), 0.5).dual_kind == "hexagonal"
    assert build_domain("hexagonal", Rect(0, 1, 0, 1), 0.25).dual_kind == "triangular"


def test_edges_sorted_unique():
    dom = build_domain("square", Rect(0, 1, 0, 1), 0.5)
    e = dom.edges()
    assert np.all(e[:, 0] < e[:, 1])
    assert len(np.unique(e, axis=0)) == len(e)
    assert len(e) == 12  # 3x3 grid
