import numpy as np
import pytest

from conflab.clusters import (SiteConfig, find_clusters, loop_adjacent_hexagons,
                              trace_outer_boundary)
from conflab.lattice import LatticeRhombus, Rect, build_domain
from conflab.loops import surrounds
from conflab.percolation import perco_loop_mass
from conflab.rng import RngStream


@pytest.fixture(scope="module")
def tri16():
    return build_domain("triangular", LatticeRhombus(16), 1.0)


def bfs_clusters(domain, open_sites):
    seen = set()
    comps = []
    for s in np.flatnonzero(open_sites):
        s = int(s)
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in domain.neighbor_lists[v]:
                w = int(w)
                if open_sites[w] and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    comps.sort(key=lambda c: c[0])
    return comps


def test_all_closed_empty(tri16):
    cfg = SiteConfig(tri16, np.zeros(tri16.n_sites, bool), 0.0)
    assert find_clusters(cfg) == []


def test_all_open_one_cluster(tri16):
    cfg = SiteConfig(tri16, np.ones(tri16.n_sites, bool), 1.0)
    comps = find_clusters(cfg)
    assert len(comps) == 1
    assert len(comps[0]) == tri16.n_sites


def test_two_isolated_sites(tri16):
    open_sites = np.zeros(tri16.n_sites, bool)
    a = tri16.index_of((2, 2))
    b = tri16.index_of((10, 10))
    open_sites[[a, b]] = True
    comps = find_clusters(SiteConfig(tri16, open_sites, 0.5))
    assert comps == [[min(a, b)], [max(a, b)]]


def test_union_find_matches_bfs_on_random_configs(tri16):
    rng = RngStream(7, 0)
    for k in range(100):
        open_sites = rng.derive(k).generator.random(tri16.n_sites) < 0.5
        cfg = SiteConfig(tri16, open_sites, 0.5)
        assert find_clusters(cfg) == bfs_clusters(tri16, open_sites)


def test_single_hexagon_boundary(tri16):
    s = tri16.index_of((8, 8))
    loop = trace_outer_boundary([s], tri16)
    assert loop.length == 6
    assert loop.is_self_avoiding()
    assert surrounds(loop, tri16.positions[s])
    assert perco_loop_mass(loop) == pytest.approx(2.0**-7)


def test_domino_boundary(tri16):
    a, b = tri16.index_of((8, 8)), tri16.index_of((9, 8))
    loop = trace_outer_boundary([a, b], tri16)
    assert loop.length == 10
    # enumeration oracle: the two cells plus every distinct lattice neighbor
    pair = {(8, 8), (9, 8)}
    ring = set()
    for (i, j) in pair:
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)):
            ring.add((i + di, j + dj))
    expected_k = len(pair | ring)
    assert expected_k == 10
    assert len(loop_adjacent_hexagons(loop)) == expected_k
    assert perco_loop_mass(loop) == pytest.approx(2.0**-expected_k)


def test_cluster_with_hole_outer_only(tri16):
    ring = [(4, 4), (5, 4), (6, 4), (6, 5), (6, 6), (5, 6), (4, 6), (4, 5)]
    # ring of sites around the hole at (5,5)
    idx = [tri16.index_of(k) for k in ring]
    loop = trace_outer_boundary(idx, tri16)
    assert surrounds(loop, tri16.positions[tri16.index_of((5, 5))])
    for k in ring:
        assert surrounds(loop, tri16.positions[tri16.index_of(k)])


def test_boundary_surrounds_every_cluster_site(tri16):
    rng = RngStream(3, 1)
    open_sites = rng.generator.random(tri16.n_sites) < 0.5
    cfg = SiteConfig(tri16, open_sites, 0.5)
    for comp in find_clusters(cfg)[:10]:
        loop = trace_outer_boundary(comp, tri16)
        assert loop.is_self_avoiding()
        for s in comp:
            assert surrounds(loop, tri16.positions[s])


def test_empty_cluster_raises(tri16):
    with pytest.raises(ValueError):
        trace_outer_boundary([], tri16)
