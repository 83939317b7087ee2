"""Convex polytopes, their distance function and the nearest-facet partition.

A :class:`Polytope` stores both descriptions of a convex body,

    K = conv(vertices) = { x : a_i . x <= b_i  for every facet i },

with unit outward normals ``a_i``.  For interior points the distance to the
boundary is the smallest facet slack ``min_i (b_i - a_i . x)``.  The facet
cell ``Omega_i`` collects the points whose nearest facet is ``i``; it is the
intersection of ``K`` with the halfspaces ``(a_j - a_i) . x <= b_j - b_i``,
hence itself a convex polytope.

Full structure (vertex enumeration, partition, triangulation) is supported in
dimensions 2 and 3.  Qhull (through scipy.spatial) does the hull and
halfspace-intersection work.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from .errors import DimensionError, MakaiError, PreconditionError, UnboundedError

TOL = 1e-9


def _scale_of(points) -> float:
    pts = np.asarray(points, dtype=float)
    c = pts.mean(axis=0)
    return float(max(np.max(np.linalg.norm(pts - c, axis=1)), 1e-300))


@dataclass(frozen=True)
class Simplex:
    """N + 1 affinely independent points in R^N."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        object.__setattr__(self, "vertices", v)
        if v.ndim != 2 or v.shape[0] != v.shape[1] + 1:
            raise DimensionError("a simplex in R^N needs N + 1 points")
        scale = _scale_of(v)
        if self.volume <= 1e-14 * scale ** v.shape[1]:
            raise DimensionError("degenerate simplex")

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]

    @property
    def volume(self) -> float:
        v = self.vertices
        return abs(np.linalg.det(v[1:] - v[0])) / math.factorial(v.shape[1])


@dataclass(frozen=True, eq=False)
class Polytope:
    """Bounded, full-dimensional convex polytope with facet incidence.

    Use :meth:`from_vertices`, :meth:`from_halfspaces` or the special
    constructors rather than calling the class directly.
    """

    normals: np.ndarray
    offsets: np.ndarray
    vertices: np.ndarray
    incidence: tuple = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.normals.shape[1]

    @property
    def n_facets(self) -> int:
        return self.normals.shape[0]

    @cached_property
    def scale(self) -> float:
        return _scale_of(self.vertices)

    @cached_property
    def volume(self) -> float:
        if self.dimension == 1:
            return float(np.ptp(self.vertices[:, 0]))
        return float(ConvexHull(self.vertices).volume)

    @cached_property
    def chebyshev(self):
        return _chebyshev(self.normals, self.offsets)

    @cached_property
    def cells(self) -> tuple:
        """Nearest-facet partition, built once per polytope."""
        return tuple(facet_partition(self))

    @property
    def diameter(self) -> float:
        v = self.vertices
        return float(np.max(np.linalg.norm(v[:, None] - v[None], axis=-1)))

    def slacks(self, x) -> np.ndarray:
        """b_i - a_i . x for each point (rows) and facet (columns)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return self.offsets[None, :] - x @ self.normals.T

    def contains(self, x, tol: float = TOL) -> np.ndarray:
        return np.all(self.slacks(x) >= -tol * self.scale, axis=1)

    def facet_vertices(self, i: int) -> np.ndarray:
        return self.vertices[list(self.incidence[i])]

    def ordered_vertices(self) -> np.ndarray:
        """Counter-clockwise vertex loop (planar polytopes only)."""
        if self.dimension != 2:
            raise DimensionError("ordered_vertices is defined for polygons")
        c = self.vertices.mean(axis=0)
        ang = np.arctan2(*(self.vertices - c).T[::-1])
        return self.vertices[np.argsort(ang)]

    def scaled(self, s: float) -> "Polytope":
        return Polytope(self.normals.copy(), self.offsets * s, self.vertices * s, self.incidence)

    def translated(self, shift) -> "Polytope":
        shift = np.asarray(shift, dtype=float)
        return Polytope(self.normals.copy(), self.offsets + self.normals @ shift,
                        self.vertices + shift, self.incidence)

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_vertices(cls, points) -> "Polytope":
        return from_vertices(points)

    @classmethod
    def from_halfspaces(cls, normals, offsets) -> "Polytope":
        return from_halfspaces(normals, offsets)

    # -- JSON ------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "vertices": self.vertices.tolist(),
            "halfspaces": [
                {"normal": a.tolist(), "offset": float(b)}
                for a, b in zip(self.normals, self.offsets)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Polytope":
        return polytope_from_dict(data)


# ---------------------------------------------------------------------------
# LP helpers


def _chebyshev(A, b):
    """Chebyshev center of {A x <= b}: returns (radius, center)."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    norms = np.linalg.norm(A, axis=1)
    dim = A.shape[1]
    c = np.zeros(dim + 1)
    c[-1] = -1.0
    A_ub = np.hstack([A, norms[:, None]])
    bounds = [(None, None)] * dim + [(0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b, bounds=bounds, method="highs")
    if res.status == 3:
        raise UnboundedError("halfspaces do not bound a compact body")
    if res.status != 0:
        raise DimensionError(f"no interior point found ({res.message})")
    return float(res.x[-1]), res.x[:-1]


def _check_bounded(A, b):
    dim = A.shape[1]
    for k in range(dim):
        for sgn in (1.0, -1.0):
            c = np.zeros(dim)
            c[k] = -sgn
            res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * dim, method="highs")
            if res.status == 3:
                raise UnboundedError("halfspaces do not bound a compact body")
            if res.status == 2:
                raise DimensionError("halfspaces are infeasible")


def _irredundant(A, b, scale):
    """Indices of constraints that are not implied by the others."""
    keep = []
    dim = A.shape[1]
    for i in range(A.shape[0]):
        others = np.delete(np.arange(A.shape[0]), i)
        # the relaxed constraint box keeps the LP bounded
        A_ub = np.vstack([A[others], A[i]])
        b_ub = np.concatenate([b[others], [b[i] + scale]])
        res = linprog(-A[i], A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * dim, method="highs")
        if res.status != 0 or -res.fun > b[i] + TOL * scale:
            keep.append(i)
    return np.array(keep, dtype=int)


# ---------------------------------------------------------------------------
# constructors


def _dedupe_rows(normals, offsets, tol):
    out_a, out_b = [], []
    for a, b in zip(normals, offsets):
        if any(np.linalg.norm(a - a2) <= tol and abs(b - b2) <= tol for a2, b2 in zip(out_a, out_b)):
            continue
        out_a.append(a)
        out_b.append(b)
    return np.array(out_a), np.array(out_b)


def _incidence(normals, offsets, vertices, scale):
    slack = offsets[None, :] - vertices @ normals.T
    return tuple(tuple(int(k) for k in np.flatnonzero(np.abs(slack[:, i]) <= 1e-8 * scale))
                 for i in range(normals.shape[0]))


def from_vertices(points) -> Polytope:
    """Convex hull of a finite point set in R^2 or R^3.

    Raises
    ------
    DimensionError
        If the points do not span R^N (e.g. three collinear points).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] not in (2, 3):
        raise DimensionError("from_vertices supports points in R^2 or R^3")
    dim = pts.shape[1]
    scale = _scale_of(pts)
    sv = np.linalg.svd(pts - pts.mean(axis=0), compute_uv=False)
    if pts.shape[0] <= dim or sv[dim - 1] <= 1e-10 * scale:
        raise DimensionError("points do not span a full-dimensional body")
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise DimensionError(str(exc)) from exc
    eq = hull.equations
    normals, offsets = _dedupe_rows(eq[:, :-1], -eq[:, -1], 1e-9)
    norms = np.linalg.norm(normals, axis=1)
    normals = normals / norms[:, None]
    offsets = offsets / norms
    verts = pts[hull.vertices]
    # drop points that are on edges but not extreme
    verts = _dedupe_points(verts, 1e-12 * scale)
    order = np.lexsort(verts.T[::-1])
    verts = verts[order]
    inc = _incidence(normals, offsets, verts, scale)
    return Polytope(normals, offsets, verts, inc)


def _dedupe_points(pts, tol):
    keep = []
    for p in pts:
        if not any(np.linalg.norm(p - q) <= tol for q in keep):
            keep.append(p)
    return np.array(keep)


def from_halfspaces(normals, offsets=None) -> Polytope:
    """Polytope {x : a_i . x <= b_i}; rows are normalized, redundant rows dropped.

    ``normals`` may also be an ``(m, N + 1)`` array ``[a | b]`` when
    ``offsets`` is omitted.

    Raises
    ------
    UnboundedError
        If the constraints do not bound a compact set.
    DimensionError
        If the set has empty interior.
    """
    A = np.asarray(normals, dtype=float)
    if offsets is None:
        A, b = A[:, :-1], A[:, -1]
    else:
        b = np.asarray(offsets, dtype=float).reshape(-1)
    if A.ndim != 2 or A.shape[1] not in (2, 3):
        raise DimensionError("from_halfspaces supports R^2 or R^3")
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms == 0):
        raise DimensionError("zero normal in halfspace list")
    A = A / norms[:, None]
    b = b / norms
    _check_bounded(A, b)
    r, center = _chebyshev(A, b)
    scale = max(float(np.max(np.abs(b - A @ center))), 1e-300)
    if r <= 1e-12 * scale:
        raise DimensionError("halfspaces have empty interior")
    keep = _irredundant(A, b, scale)
    A, b = _dedupe_rows(A[keep], b[keep], 1e-12)
    hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), center)
    verts = _dedupe_points(hs.intersections, 1e-10 * scale)
    verts = verts[np.lexsort(verts.T[::-1])]
    vscale = _scale_of(verts)
    inc = _incidence(A, b, verts, vscale)
    return Polytope(A, b, verts, inc)


def polytope_from_dict(data: dict) -> Polytope:
    """Build from the JSON layout ``{"dimension", "vertices", "halfspaces"}``."""
    hs = data.get("halfspaces")
    vs = data.get("vertices")
    if hs:
        P = from_halfspaces([h["normal"] for h in hs], [h["offset"] for h in hs])
        if vs:
            other = from_vertices(vs)
            if other.vertices.shape != P.vertices.shape or not np.allclose(
                    other.vertices, P.vertices, atol=1e-8 * P.scale):
                raise ValueError("vertices and halfspaces describe different bodies")
    elif vs:
        P = from_vertices(vs)
    else:
        raise ValueError("polytope JSON needs 'vertices' or 'halfspaces'")
    if "dimension" in data and int(data["dimension"]) != P.dimension:
        raise DimensionError("declared dimension does not match the data")
    return P


def box(lower, upper) -> Polytope:
    """Axis-aligned box; the structure is written down directly in any N."""
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    if np.any(hi <= lo):
        raise DimensionError("box needs upper > lower in every coordinate")
    dim = lo.size
    eye = np.eye(dim)
    normals = np.vstack([-eye, eye])
    offsets = np.concatenate([-lo, hi])
    verts = np.array([[hi[k] if bit else lo[k] for k, bit in enumerate(bits)]
                      for bits in itertools.product((0, 1), repeat=dim)])
    verts = verts[np.lexsort(verts.T[::-1])]
    inc = _incidence(normals, offsets, verts, _scale_of(verts))
    return Polytope(normals, offsets, verts, inc)


def simplex_polytope(points) -> Polytope:
    """Polytope of a non-degenerate simplex in any dimension."""
    pts = np.asarray(points, dtype=float)
    Simplex(pts)
    dim = pts.shape[1]
    normals, offsets = [], []
    for k in range(dim + 1):
        face = np.delete(pts, k, axis=0)
        # normal = null vector of the face's edge matrix
        _, _, vt = np.linalg.svd(face[1:] - face[0])
        a = vt[-1]
        b = a @ face[0]
        if a @ pts[k] > b:
            a, b = -a, -b
        normals.append(a)
        offsets.append(b)
    normals = np.array(normals)
    offsets = np.array(offsets)
    inc = _incidence(normals, offsets, pts, _scale_of(pts))
    return Polytope(normals, offsets, pts.copy(), inc)


def regular_polygon(n: int, circumradius: float = 1.0, phase: float = 0.0) -> Polytope:
    t = phase + 2 * np.pi * np.arange(n) / n
    return from_vertices(circumradius * np.column_stack([np.cos(t), np.sin(t)]))


def slab(L: float, dim: int = 2) -> Polytope:
    """(-L/2, L/2)^(N-1) x (0, 1)."""
    lo = [-L / 2] * (dim - 1) + [0.0]
    hi = [L / 2] * (dim - 1) + [1.0]
    return box(lo, hi)


# ---------------------------------------------------------------------------
# distance and inradius


def distance(P: Polytope, x, *, return_inside: bool = False):
    """Distance to the boundary for points of P (0 outside).

    Accepts one point or an array of points.  With ``return_inside`` a
    boolean flag (array) is returned as well.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    s = P.slacks(x).min(axis=1)
    inside = s >= 0
    d = np.where(inside, s, 0.0)
    if single:
        d, inside = float(d[0]), bool(inside[0])
    return (d, inside) if return_inside else d


def inradius(P: Polytope):
    """Radius and center of the largest inscribed ball (Chebyshev LP)."""
    try:
        r, c = P.chebyshev
    except (UnboundedError, DimensionError) as exc:
        raise MakaiError(f"inradius LP failed on a validated polytope: {exc}") from exc
    return r, c


# ---------------------------------------------------------------------------
# nearest-facet partition


@dataclass(frozen=True, eq=False)
class FacetCell:
    """Points of the parent body whose nearest facet is ``index``."""

    index: int
    cell: Polytope
    normal: np.ndarray
    offset: float
    parent: Polytope = field(repr=False)
    dominance: tuple = field(repr=False)

    @property
    def volume(self) -> float:
        return self.cell.volume

    def depth(self, x) -> np.ndarray:
        """b_i - a_i . x, the distance to the base hyperplane."""
        return self.offset - np.atleast_2d(x) @ self.normal

    def height(self, y) -> float:
        return cell_height(self, y)


def _cell_constraints(P: Polytope, i: int):
    a_i, b_i = P.normals[i], P.offsets[i]
    others = [j for j in range(P.n_facets) if j != i]
    # b_i - a_i.x <= b_j - a_j.x  <=>  (a_j - a_i).x <= b_j - b_i
    dom_A = P.normals[others] - a_i
    dom_b = P.offsets[others] - b_i
    return dom_A, dom_b


def facet_partition(P: Polytope) -> list[FacetCell]:
    """One convex cell per facet; the cells tile P up to measure zero."""
    if P.dimension not in (2, 3):
        raise NotImplementedError("the partition is implemented for N in {2, 3}")
    cells = []
    for i in range(P.n_facets):
        dom_A, dom_b = _cell_constraints(P, i)
        A = np.vstack([P.normals, dom_A])
        b = np.concatenate([P.offsets, dom_b])
        try:
            cell = from_halfspaces(A, b)
        except DimensionError:
            # empty interior can only come from a redundant facet
            continue
        cells.append(FacetCell(i, cell, P.normals[i].copy(), float(P.offsets[i]), P,
                               (dom_A, dom_b)))
    return cells


def nearest_facet(P: Polytope, x) -> np.ndarray:
    """Index of the facet attaining the distance; ties go to the lowest index."""
    return np.argmin(P.slacks(x), axis=1)


def in_facet_relint(P: Polytope, i: int, y, margin: float = TOL) -> bool:
    y = np.asarray(y, dtype=float)
    s = P.slacks(y)[0]
    tol = margin * P.scale
    if abs(s[i]) > tol:
        return False
    return bool(np.all(np.delete(s, i) > tol))


def cell_height(cell: FacetCell, y) -> float:
    """Length of the inward normal segment from ``y`` (on the base facet) inside the cell."""
    P = cell.parent
    y = np.asarray(y, dtype=float)
    if not in_facet_relint(P, cell.index, y):
        raise PreconditionError("y must lie in the relative interior of the base facet")
    inward = -cell.normal
    A = np.vstack([P.normals, cell.dominance[0]])
    b = np.concatenate([P.offsets, cell.dominance[1]])
    rate = A @ inward
    room = b - A @ y
    bounded = rate > 1e-14
    t = np.min(np.maximum(room[bounded], 0.0) / rate[bounded])
    return float(t)


def project_to_facet(P: Polytope, i: int, x) -> np.ndarray:
    """Orthogonal projection onto the hyperplane of facet ``i``."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    s = P.offsets[i] - x @ P.normals[i]
    return x + s[:, None] * P.normals[i][None, :]


# ---------------------------------------------------------------------------
# triangulation


def _facet_polygon_order(pts, normal):
    c = pts.mean(axis=0)
    u = pts[0] - c
    if np.linalg.norm(u) < 1e-300:
        u = pts[1] - c
    u /= np.linalg.norm(u)
    w = np.cross(normal, u)
    ang = np.arctan2((pts - c) @ w, (pts - c) @ u)
    return pts[np.argsort(ang)]


def triangulate(body) -> list[Simplex]:
    """Fan triangulation from the Chebyshev center over the boundary.

    A body that already is a simplex is returned as itself.  Accepts a
    :class:`Polytope` or a :class:`FacetCell`.
    """
    P = body.cell if isinstance(body, FacetCell) else body
    dim = P.dimension
    if P.vertices.shape[0] == dim + 1:
        try:
            return [Simplex(P.vertices.copy())]
        except DimensionError:
            return []
    _, center = P.chebyshev
    out = []
    for i in range(P.n_facets):
        face = P.facet_vertices(i)
        if dim == 2:
            if len(face) != 2:
                continue
            pieces = [face]
        elif dim == 3:
            ring = _facet_polygon_order(face, P.normals[i])
            pieces = [np.array([ring[0], ring[k], ring[k + 1]]) for k in range(1, len(ring) - 1)]
        else:
            raise NotImplementedError("triangulate supports N in {2, 3}")
        for tri in pieces:
            try:
                out.append(Simplex(np.vstack([center, tri])))
            except DimensionError:
                continue
    return out
