"""Conforming triangle meshes of planar polygons, with slits as seams.

Meshing is delegated to Shewchuk's Triangle (quality Delaunay refinement of
a planar straight-line graph).  Slit segments are inserted as constrained
edges; afterwards every slit node with triangles on both sides is split in
two so each side of the slit owns its own copy.  All boundary, hole and slit
nodes are fixed (homogeneous Dirichlet data).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
import shapely
import triangle as tr
from shapely.geometry import LinearRing, Point, Polygon

from ..errors import GeometryError

EQUILATERAL_AREA = np.sqrt(3.0) / 4.0


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    """Triangulation with Dirichlet flags and duplicated slit nodes.

    Attributes
    ----------
    nodes : (n, 2) float array
    triangles : (m, 3) int array, counter-clockwise
    fixed : (n,) bool array, True where every admissible field vanishes
    seams : (k, 2) int array of (original, duplicate) node pairs on slits
    """

    nodes: np.ndarray
    triangles: np.ndarray
    fixed: np.ndarray
    seams: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), int))

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    @cached_property
    def free(self) -> np.ndarray:
        return np.flatnonzero(~self.fixed)

    @cached_property
    def areas(self) -> np.ndarray:
        x = self.nodes[self.triangles]
        d1 = x[:, 1] - x[:, 0]
        d2 = x[:, 2] - x[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    @cached_property
    def gradients(self) -> np.ndarray:
        """Gradients of the three hat functions on each triangle, (m, 3, 2)."""
        x = self.nodes[self.triangles]
        g = np.empty((self.n_triangles, 3, 2))
        for k in range(3):
            a, b = x[:, (k + 1) % 3], x[:, (k + 2) % 3]
            g[:, k, 0] = a[:, 1] - b[:, 1]
            g[:, k, 1] = b[:, 0] - a[:, 0]
        return g / (2.0 * self.areas)[:, None, None]

    @cached_property
    def edges(self):
        """Unique edges and, for each, the number of triangles sharing it."""
        e = np.sort(self.triangles[:, [[0, 1], [1, 2], [2, 0]]].reshape(-1, 2), axis=1)
        uniq, counts = np.unique(e, axis=0, return_counts=True)
        return uniq, counts

    @property
    def boundary_edges(self) -> np.ndarray:
        uniq, counts = self.edges
        return uniq[counts == 1]

    def edge_lengths(self) -> np.ndarray:
        uniq, _ = self.edges
        return np.linalg.norm(self.nodes[uniq[:, 0]] - self.nodes[uniq[:, 1]], axis=1)

    def angles(self) -> np.ndarray:
        x = self.nodes[self.triangles]
        out = np.empty((self.n_triangles, 3))
        for k in range(3):
            a = x[:, (k + 1) % 3] - x[:, k]
            b = x[:, (k + 2) % 3] - x[:, k]
            cos = np.sum(a * b, axis=1) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
            out[:, k] = np.degrees(np.arccos(np.clip(cos, -1, 1)))
        return out

    def min_angle(self) -> float:
        return float(self.angles().min())

    def field(self, values) -> np.ndarray:
        """Copy of ``values`` with fixed nodes zeroed (a DiscreteField)."""
        u = np.array(values, dtype=float)
        if u.shape != (self.n_nodes,):
            raise ValueError("field must have one value per node")
        u[self.fixed] = 0.0
        return u

    def interpolate(self, func) -> np.ndarray:
        return self.field(func(self.nodes[:, 0], self.nodes[:, 1]))

    def refine(self) -> "TriangleMesh":
        """Uniform red refinement; the P1 space of the result contains this one."""
        uniq, counts = self.edges
        n = self.n_nodes
        index = {tuple(e): n + k for k, e in enumerate(uniq)}
        mid = 0.5 * (self.nodes[uniq[:, 0]] + self.nodes[uniq[:, 1]])
        nodes = np.vstack([self.nodes, mid])
        fixed = np.concatenate([self.fixed, counts == 1])
        tris = []
        for a, b, c in self.triangles:
            ab = index[(min(a, b), max(a, b))]
            bc = index[(min(b, c), max(b, c))]
            ca = index[(min(c, a), max(c, a))]
            tris += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
        seams = _coincident_pairs(nodes, fixed)
        return TriangleMesh(nodes, np.array(tris, dtype=int), fixed, seams)

    # -- text export ---------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"nodes {self.n_nodes}"]
        lines += [f"{x:.17g} {y:.17g} {int(f)}" for (x, y), f in zip(self.nodes, self.fixed)]
        lines.append(f"elements {self.n_triangles}")
        lines += [f"{a} {b} {c}" for a, b, c in self.triangles]
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "TriangleMesh":
        rows = [ln.split() for ln in text.strip().splitlines()]
        n = int(rows[0][1])
        node_rows = rows[1:1 + n]
        nodes = np.array([[float(r[0]), float(r[1])] for r in node_rows])
        fixed = np.array([r[2] == "1" for r in node_rows])
        m = int(rows[1 + n][1])
        tris = np.array([[int(v) for v in r] for r in rows[2 + n:2 + n + m]], dtype=int).reshape(-1, 3)
        return cls(nodes, tris, fixed, _coincident_pairs(nodes, fixed))

    @classmethod
    def load(cls, path) -> "TriangleMesh":
        return cls.from_text(Path(path).read_text())


def _coincident_pairs(nodes, fixed):
    idx = np.flatnonzero(fixed)
    groups = defaultdict(list)
    for k in idx:
        groups[tuple(np.round(nodes[k], 12))].append(k)
    pairs = [(g[0], j) for g in groups.values() if len(g) > 1 for j in g[1:]]
    return np.array(pairs, dtype=int).reshape(-1, 2)


# ---------------------------------------------------------------------------


def _on_segment(p, a, b, tol):
    ab = b - a
    t = np.dot(p - a, ab) / np.dot(ab, ab)
    if t <= tol or t >= 1 - tol:
        return False
    return np.linalg.norm(a + t * ab - p) <= tol * np.linalg.norm(ab)


def _insert_on_ring(ring, point, tol=1e-12):
    """Insert ``point`` into the ring if it lies inside one of its edges."""
    for k in range(len(ring)):
        if np.linalg.norm(ring[k] - point) <= tol:
            return ring
    for k in range(len(ring)):
        a, b = ring[k], ring[(k + 1) % len(ring)]
        if _on_segment(point, a, b, tol):
            return np.insert(ring, k + 1, point, axis=0)
    return ring


def _split_slit_nodes(nodes, tris, slit_edges):
    """Duplicate slit nodes so triangles on the two sides no longer share them."""
    slit_set = {tuple(sorted(e)) for e in slit_edges}
    slit_nodes = sorted({v for e in slit_set for v in e})
    node_tris = defaultdict(list)
    for t, tri in enumerate(tris):
        for v in tri:
            node_tris[v].append(t)
    tris = tris.copy()
    nodes = list(nodes)
    seams = []
    for v in slit_nodes:
        around = node_tris[v]
        # union-find over triangles around v glued along non-slit edges
        parent = {t: t for t in around}

        def find(t):
            while parent[t] != t:
                parent[t] = parent[parent[t]]
                t = parent[t]
            return t

        edge_owner = defaultdict(list)
        for t in around:
            for w in tris[t]:
                if w != v:
                    edge_owner[tuple(sorted((v, w)))].append(t)
        for e, owners in edge_owner.items():
            if e in slit_set or len(owners) < 2:
                continue
            ra, rb = find(owners[0]), find(owners[1])
            parent[ra] = rb
        comps = defaultdict(list)
        for t in around:
            comps[find(t)].append(t)
        if len(comps) < 2:
            continue
        for group in list(comps.values())[1:]:
            new = len(nodes)
            nodes.append(nodes[v])
            seams.append((v, new))
            for t in group:
                tris[t][tris[t] == v] = new
    return np.array(nodes), tris, np.array(seams, dtype=int).reshape(-1, 2)


def mesh_polygon(polygon, h: float, slits=(), holes=(), *, min_angle: float = 30.0,
                 sizing=None, max_rounds: int = 12) -> TriangleMesh:
    """Quality triangle mesh of a simple polygon with optional holes and slits.

    Parameters
    ----------
    polygon : (k, 2) array_like
        Outer boundary, either orientation, not closed.
    h : float
        Target edge length; triangles are kept below the area of an
        equilateral triangle of side ``h``.
    slits : sequence of (j, 2) array_like
        Polylines inside the polygon (endpoints may lie on the boundary).
    holes : sequence of (k, 2) array_like
        Inner boundaries.
    sizing : callable, optional
        ``sizing(xy) -> local h`` for extra refinement (takes an (m, 2) array).

    Raises
    ------
    GeometryError
        For self-intersecting polygons or slits leaving the domain.
    """
    outer = np.asarray(polygon, dtype=float)
    if outer.ndim != 2 or outer.shape[0] < 3:
        raise GeometryError("polygon needs at least 3 vertices")
    if not h > 0:
        raise GeometryError("h must be positive")
    ring = LinearRing(outer)
    if not ring.is_simple:
        raise GeometryError("polygon boundary self-intersects")
    hole_rings = [np.asarray(hh, dtype=float) for hh in holes]
    shape = Polygon(outer, [hr for hr in hole_rings])
    if not shape.is_valid:
        raise GeometryError(f"invalid polygon: {shapely.validation.explain_validity(shape)}")
    slits = [np.asarray(s, dtype=float) for s in slits]
    closed = shape.buffer(1e-12 * max(1.0, shape.length))
    for s in slits:
        if s.ndim != 2 or s.shape[0] < 2:
            raise GeometryError("a slit is a polyline with at least two points")
        for pt in s:
            if not closed.covers(Point(pt)):
                raise GeometryError("slit point outside the polygon")
            outer = _insert_on_ring(outer, pt)
            hole_rings = [_insert_on_ring(hr, pt) for hr in hole_rings]

    verts, segs = [], []

    def add_point(pt):
        for k, q in enumerate(verts):
            if np.linalg.norm(q - pt) <= 1e-12:
                return k
        verts.append(np.asarray(pt, dtype=float))
        return len(verts) - 1

    def add_ring(r):
        ids = [add_point(pt) for pt in r]
        for k in range(len(ids)):
            segs.append((ids[k], ids[(k + 1) % len(ids)]))

    add_ring(outer)
    for hr in hole_rings:
        add_ring(hr)
    n_boundary = len(segs)
    for s in slits:
        pts = [s[0]]
        for a, b in zip(s[:-1], s[1:]):
            # short slits still get an interior node so both sides separate
            k = max(2, int(np.ceil(np.linalg.norm(b - a) / h)))
            pts += [a + (b - a) * j / k for j in range(1, k + 1)]
        ids = [add_point(pt) for pt in pts]
        segs += list(zip(ids[:-1], ids[1:]))
    markers = np.array([1] * n_boundary + [2] * (len(segs) - n_boundary))
    data = {
        "vertices": np.array(verts),
        "segments": np.array(segs, dtype=int),
        "segment_markers": markers[:, None],
    }
    if hole_rings:
        data["holes"] = np.array([Polygon(hr).representative_point().coords[0] for hr in hole_rings])
    area = EQUILATERAL_AREA * h * h
    opts = f"pq{min_angle:g}a{area:.17g}"
    out = tr.triangulate(data, opts)
    if sizing is not None:
        for _ in range(max_rounds):
            x = out["vertices"][out["triangles"]]
            cen = x.mean(axis=1)
            d1 = x[:, 1] - x[:, 0]
            d2 = x[:, 2] - x[:, 0]
            ar = 0.5 * np.abs(d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
            target = np.minimum(EQUILATERAL_AREA * np.asarray(sizing(cen), dtype=float) ** 2, area)
            if np.all(ar <= target * (1 + 1e-9)):
                break
            out["triangle_max_area"] = target[:, None]
            out = tr.triangulate(out, f"rpq{min_angle:g}a")
    nodes = out["vertices"]
    tris = out["triangles"].astype(int)
    oseg = out["segments"].astype(int)
    omark = out["segment_markers"].ravel()
    fixed = np.zeros(len(nodes), bool)
    fixed[oseg.ravel()] = True
    # drop vertices not used by any triangle (e.g. inside holes)
    used = np.zeros(len(nodes), bool)
    used[tris.ravel()] = True
    if not used.all():
        remap = -np.ones(len(nodes), int)
        remap[used] = np.arange(used.sum())
        nodes, fixed, tris = nodes[used], fixed[used], remap[tris]
        oseg = remap[oseg]
        keep = np.all(oseg >= 0, axis=1)
        oseg, omark = oseg[keep], omark[keep]
    slit_edges = oseg[omark == 2]
    seams = np.zeros((0, 2), int)
    if len(slit_edges):
        nodes, tris, seams = _split_slit_nodes(nodes, tris, slit_edges)
        fixed = np.concatenate([fixed, np.ones(len(nodes) - len(fixed), bool)])
    # Triangle returns counter-clockwise triangles; enforce anyway
    x = nodes[tris]
    d1 = x[:, 1] - x[:, 0]
    d2 = x[:, 2] - x[:, 0]
    flip = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0] < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]
    return TriangleMesh(nodes, tris, fixed, seams)
