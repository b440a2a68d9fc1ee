import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sepcycle import geom
from sepcycle.cycle2d import (
    PlaneTree,
    area_bound,
    bend_edges,
    build_separating_cycle,
    clearance_profile,
    construct,
    contour_points,
    minimum_spanning_tree,
    solve_construct,
    tree_contour,
    validate_separation,
)
from sepcycle.errors import Infeasible, InfeasibleColoring
from sepcycle.hypergraph import BLUE, RED, Coloring, bipartition
from sepcycle.instances_io import GeomInstance, gen_bipartite, gen_fig3, gen_odd_cycle

EDGE = PlaneTree([(0, 0), (2, 0)], [(0, 1)])


def test_mst_matches_brute_force_length():
    rng = np.random.default_rng(2)
    P = rng.random((9, 2))
    t = minimum_spanning_tree(P)
    # Kruskal on the complete graph as an independent oracle
    pairs = sorted((np.linalg.norm(P[i] - P[j]), i, j) for i in range(9) for j in range(i + 1, 9))
    parent = list(range(9))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    total = 0.0
    for d, i, j in pairs:
        a, b = find(i), find(j)
        if a != b:
            parent[a] = b
            total += d
    assert t.length == pytest.approx(total)
    assert len(t.edges) == 8


def test_clearance_perpendicular_blue():
    prof = clearance_profile(EDGE, [(1, 1)])
    assert prof.delta2[0] == pytest.approx(1.0)
    assert prof.delta3[0] == pytest.approx(1.0)
    assert prof.delta1 == pytest.approx([math.sqrt(2)] * 2)


def test_clearance_incident_blue():
    prof = clearance_profile(EDGE, [(1, 0)])
    assert prof.delta2[0] == 0.0
    assert prof.delta3[0] == math.inf


def test_bend_single_incident_blue():
    blue = [(1, 0)]
    bent = bend_edges(EDGE, blue, clearance_profile(EDGE, blue))
    assert len(bent.vertices) == 3
    apex = bent.apexes[0]
    assert apex[0] == pytest.approx(1.0)
    h = abs(apex[1])
    assert 0 < h <= 1.0 / 4
    A, B = bent.segments()
    assert np.all(geom.dist_points_segments(blue, A, B) > 0)


def test_bend_identity_without_incident_blue():
    blue = [(1, 1)]
    bent = bend_edges(EDGE, blue, clearance_profile(EDGE, blue))
    assert np.array_equal(bent.vertices, EDGE.vertices)
    assert bent.edges == EDGE.edges


def test_bend_two_collinear_blues():
    blue = [(0.5, 0), (1.5, 0)]
    bent = bend_edges(EDGE, blue, clearance_profile(EDGE, blue))
    assert np.all(clearance_profile(bent, blue).delta2 > 0)


def test_single_edge_contour():
    h = 0.01
    tree = PlaneTree([(0, 0), (1, 0)], [(0, 1)])
    c = tree_contour(tree, h)
    assert abs(geom.polygon_area(c.vertices)) == pytest.approx(2 * h * 1 + 4 * h * h)
    assert c.length == pytest.approx(2 + 8 * h)


def test_star_contour_interior():
    tree = PlaneTree([(0, 0), (1, 0), (-0.5, 0.8), (-0.5, -0.8)], [(0, 1), (0, 2), (0, 3)])
    c = tree_contour(tree, 0.05)
    assert geom.polygon_is_simple(c.vertices)
    assert np.all(geom.classify_points(tree.vertices, c.vertices) == geom.Location.INTERIOR)


def test_path_contour_length_accounting():
    rng = np.random.default_rng(4)
    P = rng.random((10, 2))
    P = P[np.argsort(P[:, 0])]
    tree = PlaneTree(P, [(i, i + 1) for i in range(9)])
    h = 1e-3
    c = tree_contour(tree, h)
    assert c.length <= 2 * tree.length + 16 * h * len(P)


def test_single_red_gives_small_square():
    inst = GeomInstance(2, [(0, 0), (1, 0)], [(0, 1)])
    c = build_separating_cycle(inst, Coloring((RED, BLUE)))
    assert c.length <= 8 * c.offset + 1e-12
    assert validate_separation(c, inst).passed


def test_fig3_matching_encloses_one_endpoint_each():
    inst = gen_fig3()
    col = bipartition(inst.hypergraph)
    c = build_separating_cycle(inst, col)
    loc = validate_separation(c, inst, col).locations
    for a, b in inst.edges:
        assert (loc[a] == 1) != (loc[b] == 1)


def test_validate_square_examples():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    ok = GeomInstance(2, [(0.5, 0.5), (2, 2)], [(0, 1)])
    bad = GeomInstance(2, [(0.2, 0.2), (0.8, 0.8)], [(0, 1)])
    assert validate_separation(sq, ok).passed
    assert not validate_separation(sq, bad).passed


def test_odd_cycles_rejected():
    for k in (3, 5, 7):
        with pytest.raises(Infeasible):
            solve_construct(gen_odd_cycle(k))


def test_monochromatic_coloring_rejected():
    inst = GeomInstance(2, [(0, 0), (1, 0)], [(0, 1)])
    with pytest.raises(InfeasibleColoring):
        construct(inst, Coloring((RED, RED)))


def test_contour_is_counterclockwise():
    tree = PlaneTree([(0, 0), (1, 0), (1, 1)], [(0, 1), (1, 2)])
    assert geom.polygon_area(contour_points(tree, 0.05)) > 0


@given(st.integers(0, 10_000), st.integers(2, 40))
def test_random_bipartite_separated(seed, n):
    inst = gen_bipartite(n, 2 * n, seed)
    col = bipartition(inst.hypergraph)
    c = construct(inst, col)
    rep = validate_separation(c.cycle, inst, col)
    assert rep.passed and rep.reds_strict and rep.blues_strict
    assert abs(c.cycle.area) <= area_bound(c.cycle, c.bent, inst.n) * (1 + 1e-9)


@given(st.integers(0, 10_000))
def test_halving_offset_halves_area_bound(seed):
    inst = gen_bipartite(12, 20, seed)
    c = construct(inst, bipartition(inst.hypergraph))
    small = construct(inst, c.coloring, max_offset=c.cycle.offset / 2)
    assert area_bound(small.cycle, small.bent, inst.n) <= area_bound(c.cycle, c.bent, inst.n) / 2 + 1e-15
