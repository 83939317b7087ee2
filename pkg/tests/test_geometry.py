import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from makai import geometry as g
from makai.errors import DimensionError, PreconditionError, UnboundedError


def test_square_basics(unit_square):
    P = unit_square
    assert P.dimension == 2 and P.n_facets == 4
    assert P.volume == pytest.approx(1.0)
    r, c = g.inradius(P)
    assert r == pytest.approx(0.5) and np.allclose(c, [0.5, 0.5])
    assert P.diameter == pytest.approx(math.sqrt(2))


def test_halfspace_and_vertex_descriptions_agree():
    P = g.from_halfspaces([[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1]], [1, 1, 1, 1, 5])
    assert P.n_facets == 4  # the last constraint is redundant
    Q = g.from_vertices(P.vertices)
    assert Q.volume == pytest.approx(P.volume)


def test_degenerate_and_unbounded_inputs():
    with pytest.raises(DimensionError):
        g.from_vertices([[0, 0], [1, 1], [2, 2]])
    with pytest.raises(UnboundedError):
        g.from_halfspaces([[1, 0], [0, 1]], [1, 1])
    with pytest.raises(DimensionError):
        g.Simplex(np.array([[0, 0], [1, 0], [2, 0]], float))


def test_regular_hexagon_inradius():
    r, _ = g.inradius(g.regular_polygon(6, 1.0))
    assert r == pytest.approx(math.sqrt(3) / 2)


def test_box3d_and_simplex():
    B = g.box([0, 0, 0], [1, 2, 3])
    assert B.volume == pytest.approx(6) and g.inradius(B)[0] == pytest.approx(0.5)
    S = g.simplex_polytope([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    r, _ = g.inradius(S)
    assert r == pytest.approx(1 / (3 + math.sqrt(3)))


def test_json_round_trip(unit_square):
    Q = g.Polytope.from_dict(json.loads(unit_square.to_json()))
    np.testing.assert_allclose(Q.offsets, unit_square.offsets)
    assert Q.volume == pytest.approx(1.0)


def test_distance_function(unit_square):
    d = g.distance(unit_square, [[0.2, 0.5], [0.5, 0.5], [2.0, 2.0]])
    np.testing.assert_allclose(d, [0.2, 0.5, 0.0])
    val, inside = g.distance(unit_square, [3.0, 0.5], return_inside=True)
    assert val == 0.0 and not inside


def _random_polygon(seed, k=15):
    rng = np.random.default_rng(seed)
    return g.from_vertices(rng.normal(size=(k, 2)))


@pytest.mark.parametrize("seed", range(6))
def test_partition_tiles_the_body(seed):
    P = _random_polygon(seed)
    cells = g.facet_partition(P)
    assert sum(c.volume for c in cells) == pytest.approx(P.volume, rel=1e-10)
    rng = np.random.default_rng(seed + 100)
    lo, hi = P.vertices.min(0), P.vertices.max(0)
    x = rng.uniform(lo, hi, (400, 2))
    x = x[P.contains(x, 0)]
    nf = g.nearest_facet(P, x)
    index = {c.index: c for c in cells}
    for xi, i in zip(x, nf):
        assert index[i].cell.contains(xi[None], tol=1e-7)[0]
        # on its own cell the distance equals the facet slack
        assert index[i].depth(xi)[0] == pytest.approx(g.distance(P, xi), abs=1e-12)


def test_partition_three_dimensional():
    B = g.box([0, 0, 0], [1, 2, 3])
    cells = g.facet_partition(B)
    assert len(cells) == 6
    assert sum(c.volume for c in cells) == pytest.approx(6.0)


def test_cell_height_and_projection(unit_square):
    cells = {c.index: c for c in g.facet_partition(unit_square)}
    # bottom facet: the mid point sees the centre at height 1/2
    bottom = [k for k in range(4) if np.allclose(unit_square.normals[k], [0, -1])][0]
    assert cells[bottom].height([0.5, 0.0]) == pytest.approx(0.5)
    assert cells[bottom].height([0.25, 0.0]) == pytest.approx(0.25)
    with pytest.raises(PreconditionError):
        cells[bottom].height([0.5, 0.3])
    y = g.project_to_facet(unit_square, bottom, [[0.3, 0.7]])
    np.testing.assert_allclose(y, [[0.3, 0.0]], atol=1e-15)


def test_triangulation_volume():
    for P in (g.regular_polygon(7), g.box([0, 0, 0], [1, 1, 2])):
        assert sum(S.volume for S in g.triangulate(P)) == pytest.approx(P.volume)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.2, 5.0))
def test_scaling_laws(seed, s):
    P = _random_polygon(seed, 8)
    Q = P.scaled(s)
    assert Q.volume == pytest.approx(s**2 * P.volume, rel=1e-9)
    assert g.inradius(Q)[0] == pytest.approx(s * g.inradius(P)[0], rel=1e-7)


def test_ordered_vertices_ccw():
    P = g.regular_polygon(5)
    v = P.ordered_vertices()
    area = 0.5 * np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1])
    assert area > 0
    with pytest.raises(DimensionError):
        g.box([0, 0, 0], [1, 1, 1]).ordered_vertices()
