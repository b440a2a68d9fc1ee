import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sepcycle import approx, geom
from sepcycle.cycle2d import validate_separation
from sepcycle.errors import Infeasible, TooLarge
from sepcycle.hypergraph import bipartition
from sepcycle.instances_io import GeomInstance, gen_escape_square, gen_grid_hard, gen_matching, gen_odd_cycle
from strawman import strawman_solves


def test_few_single_point():
    f = approx.few_path_2d([(0.3, 0.4)], (0, 0, 1, 1))
    assert f.length == 0.0 and list(f.order) == [0]


def test_few_square_corners():
    f = approx.few_path_2d([(0, 0), (1, 0), (1, 1), (0, 1)], (0, 0, 1, 1))
    assert f.length <= math.sqrt(8) + 1.75
    assert f.length == pytest.approx(3.0)


def test_few_thousand_points():
    P = np.random.default_rng(0).random((1000, 2))
    f = approx.few_path_2d(P, (0, 0, 1, 1))
    assert f.length <= math.sqrt(2000) + 1.75
    assert sorted(f.order) == list(range(1000))


def test_boundary_points_go_to_lower_strip():
    order = approx.snake_order([(0.2, 0.5), (0.8, 0.5), (0.5, 0.75)], 2, 0.0, 1.0)
    # both y = 0.5 points sit in strip 0 (walked left to right), the last in strip 1
    assert list(order) == [0, 1, 2]


@given(st.integers(1, 300), st.floats(0.2, 5.0), st.floats(0.2, 5.0), st.integers(0, 1000))
def test_few_rectangle_bound(n, W, H, seed):
    P = np.random.default_rng(seed).random((n, 2)) * [W, H]
    f = approx.few_path_2d(P, (0, 0, W, H))
    assert f.length <= approx.few_bound(n, W, H) + 1e-9
    assert sorted(f.order) == list(range(n))


def test_guess_rectangle_contains_lens():
    rect = approx.guess_rectangle((0, 0), (1, 0))
    t = np.linspace(0, 2 * math.pi, 400)
    # boundary of the lens: arcs of the radius-|ab| circles around a and b
    A = np.c_[np.cos(t), np.sin(t)]
    B = np.c_[1 + np.cos(t), np.sin(t)]
    lens = np.concatenate([A[np.linalg.norm(A - [1, 0], axis=1) <= 1], B[np.linalg.norm(B, axis=1) <= 1]])
    assert np.all(rect.contains(lens, 1e-12))
    assert rect.contains([(0.5, math.sqrt(3) / 2)], 1e-12)[0]


def test_min_diam_examples():
    one = GeomInstance(2, [(0, 0), (1, 0)], [(0, 1)])
    assert approx.min_diam_selection(one)[1] == 0.0
    two = GeomInstance(2, [(0, 0), (10, 0), (1, 0), (11, 0)], [(0, 1), (2, 3)])
    sel, lb = approx.min_diam_selection(two)
    assert set(sel) == {0, 2} and lb == pytest.approx(2.0)
    grid = gen_grid_hard(3)
    assert approx.min_diam_selection(grid)[1] == pytest.approx(2 * math.sqrt(2))


def test_min_diam_limit():
    with pytest.raises(TooLarge):
        approx.min_diam_selection(gen_matching(15, 0))


@given(st.integers(1, 9), st.integers(0, 10_000))
def test_two_sat_equals_brute_force(n, seed):
    inst = gen_matching(n, seed)
    assert approx.min_diam_two_sat(inst) == pytest.approx(approx.min_diam_selection(inst)[1])


def test_single_pair():
    inst = GeomInstance(2, [(0, 0), (1, 0)], [(0, 1)])
    c = approx.sqrt_approx(inst)
    assert c.length <= 8 * c.offset + 1e-12
    assert validate_separation(c, inst).passed


def test_grid_k4_ratio():
    inst = gen_grid_hard(4)
    c = approx.sqrt_approx(inst)
    assert validate_separation(c, inst).passed
    lb = approx.min_diam_two_sat(inst)
    assert c.length / lb <= 10 * math.sqrt(16)


def test_escape_square():
    inst = gen_escape_square()
    bipartition(inst.hypergraph)
    c = approx.sqrt_approx(inst)
    assert validate_separation(c, inst).passed
    assert not strawman_solves(inst)


def test_odd_cycle_infeasible():
    with pytest.raises(Infeasible):
        approx.sqrt_approx(gen_odd_cycle(5))


def test_mst_not_longer_than_few():
    res = approx.sqrt_approx_detailed(gen_matching(9, 3))
    assert res.mst_length <= res.few_length + 1e-12


@given(st.integers(1, 7), st.integers(0, 10_000))
def test_oracle_pair_never_abandoned(n, seed):
    inst = gen_matching(n, seed)
    sel, _ = approx.min_diam_selection(inst)
    if len(sel) < 2:
        return
    pair, _ = geom.diameter(inst.points[list(sel)])
    i, j = sorted((sel[pair[0]], sel[pair[1]]))
    base = bipartition(inst.hypergraph)
    tol = geom.default_tolerance(inst.points)
    assert approx.classify_candidate(inst, base, i, j, tol) is not None


@given(st.integers(2, 8), st.integers(0, 10_000))
def test_sqrt_approx_valid_and_bounded(n, seed):
    inst = gen_matching(n, seed)
    res = approx.sqrt_approx_detailed(inst)
    rep = validate_separation(res.cycle, inst)
    assert rep.passed
    _, lb = approx.min_diam_selection(inst)
    assert res.cycle.length / max(lb, 16 * res.cycle.offset) <= 10 * math.sqrt(n)


def test_few_3d_visits_all():
    P = np.random.default_rng(5).random((64, 3))
    f = approx.few_path_3d(P, (0, 0, 0, 1, 1, 1))
    assert sorted(f.order) == list(range(64))
    assert f.length <= 3 * 64 ** (2 / 3) + 6
