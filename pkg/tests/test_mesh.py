import numpy as np
import pytest

from makai.errors import GeometryError
from makai.spectral.mesh import TriangleMesh, mesh_polygon

SQUARE = [[0, 0], [1, 0], [1, 1], [0, 1]]


def _boundary_nodes(mesh):
    x, y = mesh.nodes.T
    return (np.isclose(x, 0) | np.isclose(x, 1) | np.isclose(y, 0) | np.isclose(y, 1))


def test_square_mesh_properties():
    m = mesh_polygon(SQUARE, 0.1)
    assert 150 <= m.n_triangles <= 450
    assert np.all(m.areas > 0)
    assert m.min_angle() >= 15
    np.testing.assert_array_equal(m.fixed, _boundary_nodes(m))
    assert m.areas.sum() == pytest.approx(1.0)
    # target edge length honoured within a factor 2
    assert m.edge_lengths().max() <= 2 * 0.1


def test_conforming_edges():
    m = mesh_polygon(SQUARE, 0.1)
    uniq, counts = m.edges
    assert set(np.unique(counts)) <= {1, 2}
    b = m.boundary_edges
    assert np.all(m.fixed[b])


def test_slit_is_a_seam():
    slit = [[0.2, 0.5], [0.8, 0.5]]
    m = mesh_polygon(SQUARE, 0.1, slits=[slit])
    assert len(m.seams) > 0
    a, b = m.seams.T
    np.testing.assert_allclose(m.nodes[a], m.nodes[b])
    assert np.all(m.fixed[a]) and np.all(m.fixed[b])
    # no triangle uses both copies of a duplicated node
    for i, j in m.seams:
        assert not np.any(np.isin(m.triangles, [i]).any(1) & np.isin(m.triangles, [j]).any(1))
    # slit edges are boundary edges of the mesh (one triangle per side)
    on_slit = np.isclose(m.nodes[:, 1], 0.5) & (m.nodes[:, 0] > 0.2 - 1e-12) & (m.nodes[:, 0] < 0.8 + 1e-12)
    be = m.boundary_edges
    assert np.sum(on_slit[be].all(1)) >= 2 * 6


def test_slit_from_the_boundary():
    m = mesh_polygon(SQUARE, 0.1, slits=[[[0.0, 0.5], [0.6, 0.5]]])
    assert m.areas.sum() == pytest.approx(1.0)
    assert len(m.seams) > 0


def test_errors():
    with pytest.raises(GeometryError):
        mesh_polygon([[0, 0], [1, 1], [1, 0], [0, 1]], 0.1)  # bow tie
    with pytest.raises(GeometryError):
        mesh_polygon(SQUARE, 0.1, slits=[[[0.5, 0.5], [1.5, 0.5]]])


def test_holes_and_nonconvex():
    L = [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]
    m = mesh_polygon(L, 0.1)
    assert m.areas.sum() == pytest.approx(3.0)
    hole = [[0.4, 0.4], [0.6, 0.4], [0.6, 0.6], [0.4, 0.6]]
    m2 = mesh_polygon(SQUARE, 0.05, holes=[hole])
    assert m2.areas.sum() == pytest.approx(1 - 0.04)


def test_refinement_nested():
    m = mesh_polygon(SQUARE, 0.2)
    r = m.refine()
    assert r.n_triangles == 4 * m.n_triangles
    assert r.areas.sum() == pytest.approx(1.0)
    np.testing.assert_array_equal(r.fixed, _boundary_nodes(r))
    np.testing.assert_array_equal(r.nodes[: m.n_nodes], m.nodes)


def test_text_round_trip(tmp_path):
    m = mesh_polygon(SQUARE, 0.2, slits=[[[0.3, 0.5], [0.7, 0.5]]])
    path = tmp_path / "m.txt"
    m.save(path)
    back = TriangleMesh.load(path)
    np.testing.assert_array_equal(back.triangles, m.triangles)
    np.testing.assert_array_equal(back.fixed, m.fixed)
    np.testing.assert_allclose(back.nodes, m.nodes)
    assert len(back.seams) == len(m.seams)
    first = path.read_text().splitlines()
    assert first[0] == f"nodes {m.n_nodes}"


def test_deterministic():
    a = mesh_polygon(SQUARE, 0.07)
    b = mesh_polygon(SQUARE, 0.07)
    np.testing.assert_array_equal(a.triangles, b.triangles)
