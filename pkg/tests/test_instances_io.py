import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepcycle import geom
from sepcycle.errors import Infeasible, ParseError, ValidationError
from sepcycle.hypergraph import bipartition
from sepcycle.instances_io import (
    GeomInstance,
    gen_convex,
    gen_escape_square,
    gen_even_cycle,
    gen_fig17,
    gen_grid_hard,
    gen_infeasible_triangle,
    gen_odd_cycle,
    gen_random_hypergraph,
    load_instance,
    parse_instance,
    save_instance,
    serialize_instance,
)

MINIMAL = '{"dim": 2, "points": [[0, 0], [1, 0]], "edges": [[0, 1]]}'


def test_minimal_document():
    inst = parse_instance(MINIMAL)
    assert inst.n == 2 and len(inst.edges) == 1


def test_singleton_edge_rejected():
    with pytest.raises(ValidationError, match="singleton edge"):
        parse_instance('{"dim": 2, "points": [[0, 0], [1, 0], [2, 0], [3, 0]], "edges": [[3]]}')


@pytest.mark.parametrize(
    "text,where",
    [
        ('{"dim": 2, "points": [[0, 0]', "line 1"),
        ('{"dim": 2, "points": [[0, "a"]], "edges": []}', "points[0]"),
        ('{"dim": 2, "points": [], "edges": [[0.5, 1]]}', "edges[0]"),
        ('{"points": [], "edges": []}', "dim"),
    ],
)
def test_parse_errors_carry_context(text, where):
    with pytest.raises(ParseError, match=where.replace("[", r"\[").replace("]", r"\]")):
        parse_instance(text)


def test_validation_errors():
    with pytest.raises(ValidationError):
        GeomInstance(2, [(0, 0), (0, 0)], [(0, 1)])
    with pytest.raises(ValidationError):
        GeomInstance(2, [(0, 0), (1, 0)], [(0, 2)])


def test_file_round_trip(tmp_path):
    inst = gen_fig17()
    path = tmp_path / "x.json"
    save_instance(inst, path)
    assert load_instance(path) == inst
    assert path.read_bytes() == serialize_instance(inst).encode()


coords = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@st.composite
def documents(draw):
    dim = draw(st.sampled_from([2, 3]))
    pts = draw(st.lists(st.tuples(*[coords] * dim), min_size=2, max_size=12, unique=True))
    n = len(pts)
    edges = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=2, max_size=4, unique=True), max_size=8))
    colors = draw(st.none() | st.lists(st.sampled_from("RB"), min_size=n, max_size=n))
    meta = draw(st.dictionaries(st.sampled_from(["name", "seed", "note"]), st.integers(0, 99) | st.text(max_size=5)))
    return GeomInstance(dim, pts, edges, colors, meta)


@settings(max_examples=1000)
@given(documents())
def test_round_trip_fuzz(inst):
    text = serialize_instance(inst)
    back = parse_instance(text)
    assert back == inst
    assert serialize_instance(back) == text


def test_grid_hard_shapes():
    one = gen_grid_hard(1)
    assert np.linalg.norm(one.points[0] - one.points[1]) == pytest.approx(2.0)
    g = gen_grid_hard(3)
    assert len(g.edges) == 9
    left, right = g.points[:9], g.points[9:]
    assert np.ptp(left, axis=0) == pytest.approx([1, 1])
    assert np.ptp(right, axis=0) == pytest.approx([1, 1])
    assert right[:, 0].min() - left[:, 0].max() == pytest.approx(1.0)


@pytest.mark.parametrize("n", [1, 7, 12])
def test_convex_generator_no_collinear_triples(n):
    inst = gen_convex(n, n)
    assert inst.n == 2 * n
    P = inst.points
    for a, b, c in itertools.combinations(range(len(P)), 3):
        assert geom.orient(P[a], P[b], P[c]) != 0
    if n >= 2:
        assert len(geom.hull_indices(P)) == 2 * n


def test_cycle_generators():
    for k in (3, 5):
        with pytest.raises(Infeasible):
            bipartition(gen_odd_cycle(k).hypergraph)
    with pytest.raises(Infeasible):
        bipartition(gen_infeasible_triangle().hypergraph)
    bipartition(gen_even_cycle(4).hypergraph)


def test_escape_square_is_bipartite():
    bipartition(gen_escape_square().hypergraph)


def test_generators_deterministic():
    assert serialize_instance(gen_random_hypergraph(9, 6, 4)) == serialize_instance(gen_random_hypergraph(9, 6, 4))
    assert serialize_instance(gen_convex(6, 2)) == serialize_instance(gen_convex(6, 2))
