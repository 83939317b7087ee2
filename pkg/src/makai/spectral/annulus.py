"""Slit annulus with a small tooth: a simply connected set with lambda_2 r^2 < pi^2 / 4.

The slit annulus ``A = {1 < |x| < 2} minus {(t, 0) : 1 < t < 2}`` has
first Dirichlet eigenvalue exactly pi^2, with eigenfunction (polar
coordinates, theta in (0, 2 pi))

    u_A = sin(pi (r - 1)) sin(theta / 2) / sqrt(r).

Adding the tooth ``{sqrt(4 - y^2) <= x < 2 + eps, |y| < eps}`` (cut by the
prolonged slit) strictly lowers the eigenvalue, but only by about 1e-6 for
eps = 0.1.  That is far below the discretization error of a P1 space, so the
certificate uses a Rayleigh-Ritz space spanned by ``u_A`` (extended by zero)
and the P1 hat functions of the mesh near the tooth.  Every element of that
space is admissible for the toothed set, and all cross terms with ``u_A``
reduce to boundary integrals of smooth functions (divergence theorem), so
they are computed to round-off with Gauss-Legendre rules.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .fem import mass_matrix, minimize_lambda, stiffness_matrix
from .mesh import TriangleMesh, mesh_polygon

PI = math.pi
#: int_A u_A^2 and int_A |grad u_A|^2
UA_MASS = PI / 2.0
UA_ENERGY = PI**3 / 2.0

_GX, _GW = np.polynomial.legendre.leggauss(24)
_GX = 0.5 * (_GX + 1.0)
_GW = 0.5 * _GW


def slit_annulus_mode(x, y):
    r = np.hypot(x, y)
    th = np.mod(np.arctan2(y, x), 2 * PI)
    return np.sin(PI * (r - 1)) * np.sin(th / 2) / np.sqrt(r)


def slit_annulus_mode_grad(x, y):
    r = np.hypot(x, y)
    th = np.mod(np.arctan2(y, x), 2 * PI)
    s = np.sin(PI * (r - 1))
    radial = (PI * np.cos(PI * (r - 1)) - 0.5 * s / r) / np.sqrt(r) * np.sin(th / 2)
    angular = s / np.sqrt(r) * 0.5 * np.cos(th / 2) / r
    c, sn = x / r, y / r
    return radial * c - angular * sn, radial * sn + angular * c


@dataclass(frozen=True)
class ToothGeometry:
    """Polygonal subset of the toothed slit annulus."""

    outer: np.ndarray
    hole: np.ndarray
    slit: np.ndarray
    eps: float

    @property
    def has_tooth(self) -> bool:
        return self.eps > 0


def tooth_geometry(eps: float, h: float) -> ToothGeometry:
    """Outer ring inscribed in r = 2, hole circumscribed about r = 1.

    Both approximations shrink the set, so the polygon lies inside the
    toothed annulus and P1 values stay valid upper bounds.  ``eps = 0``
    gives the plain slit annulus.
    """
    n_out = max(64, int(math.ceil(4 * PI / h)))
    n_in = max(48, int(math.ceil(2 * PI / h)))
    if eps > 0:
        a0 = math.asin(eps / 2)
        th = np.linspace(a0, 2 * PI - a0, n_out + 1)
        arc = 2 * np.column_stack([np.cos(th), np.sin(th)])
        outer = np.vstack([[[2 + eps, 0.0], [2 + eps, eps]], arc, [[2 + eps, -eps]]])
        tip = [2 + eps, 0.0]
    else:
        th = 2 * PI * np.arange(n_out) / n_out
        outer = 2 * np.column_stack([np.cos(th), np.sin(th)])
        tip = [2.0, 0.0]
    R = 1.0 / math.cos(PI / n_in)
    ti = 2 * PI * np.arange(n_in) / n_in
    hole = R * np.column_stack([np.cos(ti), np.sin(ti)])
    slit = np.array([[R, 0.0], tip])
    return ToothGeometry(outer, hole, slit, float(eps))


def mesh_tooth(eps: float, h: float, local_h: float | None = None) -> TriangleMesh:
    g = tooth_geometry(eps, h)
    sizing = None
    if local_h is not None and local_h < h:
        reach = max(3 * eps, 0.15)

        def sizing(xy):
            d = np.hypot(xy[:, 0] - 2.0, xy[:, 1])
            return np.where(d < reach, local_h, h)

    return mesh_polygon(g.outer, h, slits=[g.slit], holes=[g.hole], sizing=sizing)


# ---------------------------------------------------------------------------
# boundary-integral coupling between u_A and P1 hats


def _clip_to_disk(P, Q, R=2.0):
    d = Q - P
    a = d @ d
    b = 2 * P @ d
    c = P @ P - R * R
    disc = b * b - 4 * a * c
    if disc <= 0:
        return None
    s = math.sqrt(disc)
    lo = max((-b - s) / (2 * a), 0.0)
    hi = min((-b + s) / (2 * a), 1.0)
    if hi <= lo:
        return None
    return P + lo * d, P + hi * d


def _barycentric(X, pts):
    T = np.array([[X[0, 0] - X[2, 0], X[1, 0] - X[2, 0]],
                  [X[0, 1] - X[2, 1], X[1, 1] - X[2, 1]]])
    lam = np.linalg.solve(T, (pts - X[2]).T).T
    return np.column_stack([lam[:, 0], lam[:, 1], 1 - lam.sum(axis=1)])


def _side_sign(X):
    """+1 above the slit, -1 below; keeps theta on the right branch at y = 0."""
    return 1.0 if X[:, 1].sum() >= 0 else -1.0


def _eval_branch(pts, sign):
    y = pts[:, 1]
    # points exactly on the slit evaluate with the side's limit (both 0)
    y = np.where(y == 0, sign * 1e-300, y)
    return pts[:, 0], y


def _triangle_coupling(X):
    """Return (int grad u_A, int_boundary hat_k d_n u_A) over T intersected with {r < 2}."""
    sign = _side_sign(X)
    grad_int = np.zeros(2)
    flux = np.zeros(3)
    for k in range(3):
        seg = _clip_to_disk(X[k], X[(k + 1) % 3])
        if seg is None:
            continue
        P, Q = seg
        e = Q - P
        L = float(np.hypot(*e))
        if L < 1e-15:
            continue
        n = np.array([e[1], -e[0]]) / L
        pts = P[None, :] + _GX[:, None] * e[None, :]
        x, y = _eval_branch(pts, sign)
        u = slit_annulus_mode(x, y)
        gx, gy = slit_annulus_mode_grad(x, y)
        grad_int += (_GW @ u) * L * n
        flux += (_GW * (gx * n[0] + gy * n[1])) @ _barycentric(X, pts) * L
    # arcs of r = 2 inside T (u_A vanishes there, its normal derivative does not)
    angles = []
    for k in range(3):
        P, Q = X[k], X[(k + 1) % 3]
        d = Q - P
        a, b, c = d @ d, 2 * P @ d, P @ P - 4.0
        disc = b * b - 4 * a * c
        if disc < 0:
            continue
        for t in ((-b - math.sqrt(disc)) / (2 * a), (-b + math.sqrt(disc)) / (2 * a)):
            if 0 <= t <= 1:
                pt = P + t * d
                angles.append(math.atan2(pt[1], pt[0]))
    if len(angles) >= 2:
        angles = sorted(angles)
        for a0, a1 in zip(angles, angles[1:] + [angles[0] + 2 * PI]):
            if a1 - a0 < 1e-15:
                continue
            am = 0.5 * (a0 + a1)
            if _barycentric(X, 2 * np.array([[math.cos(am), math.sin(am)]])).min() < 0:
                continue
            th = a0 + _GX * (a1 - a0)
            pts = 2 * np.column_stack([np.cos(th), np.sin(th)])
            x, y = _eval_branch(pts, sign)
            gx, gy = slit_annulus_mode_grad(x, y)
            dn = gx * np.cos(th) + gy * np.sin(th)
            flux += (_GW * dn) @ _barycentric(X, pts) * 2 * (a1 - a0)
    return grad_int, flux


@dataclass
class RitzResult:
    value: float
    coefficients: np.ndarray
    local_nodes: np.ndarray
    gain: float


def enriched_ritz(mesh: TriangleMesh, radius: float = 0.3, center=(2.0, 0.0)) -> RitzResult:
    """Smallest Ritz value on span{u_A} + {P1 hats of free nodes near ``center``}.

    Cross terms: int grad u_A . grad hat = grad hat . (boundary integral of
    u_A n), and pi^2 int u_A hat = int grad u_A . grad hat - boundary
    integral of hat d_n u_A, both over T intersected with the disk r < 2.
    """
    nodes = mesh.nodes
    c = np.asarray(center, dtype=float)
    loc = np.flatnonzero(~mesh.fixed & (np.linalg.norm(nodes - c, axis=1) < radius))
    index = -np.ones(mesh.n_nodes, dtype=int)
    index[loc] = np.arange(loc.size)
    m = loc.size
    K = np.zeros((m + 1, m + 1))
    M = np.zeros((m + 1, m + 1))
    K[0, 0] = UA_ENERGY
    M[0, 0] = UA_MASS
    Kg = stiffness_matrix(mesh)[loc][:, loc].toarray()
    Mg = mass_matrix(mesh)[loc][:, loc].toarray()
    K[1:, 1:] = Kg
    M[1:, 1:] = Mg
    touched = np.flatnonzero(np.any(index[mesh.triangles] >= 0, axis=1))
    for t in touched:
        tri = mesh.triangles[t]
        X = nodes[tri]
        grad_int, flux = _triangle_coupling(X)
        G = mesh.gradients[t]
        a = G @ grad_int
        mvec = (a - flux) / PI**2
        for k in range(3):
            i = index[tri[k]]
            if i < 0:
                continue
            K[0, i + 1] += a[k]
            K[i + 1, 0] += a[k]
            M[0, i + 1] += mvec[k]
            M[i + 1, 0] += mvec[k]
    w, v = scipy.linalg.eigh(K, M, subset_by_index=[0, 0])
    coef = v[:, 0]
    value = float(coef @ K @ coef / (coef @ M @ coef))
    return RitzResult(value, coef, loc, PI**2 - value)


@dataclass
class ToothStudy:
    eps: float
    h: float
    fem_value: float
    ritz_value: float
    n_triangles: int
    n_seam_pairs: int

    @property
    def value(self) -> float:
        """Best certified upper bound of lambda_2 for the toothed set."""
        return min(self.fem_value, self.ritz_value)


def tooth_study(eps: float = 0.1, h: float = 0.02, local_h: float | None = None,
                radius: float | None = None) -> ToothStudy:
    mesh = mesh_tooth(eps, h, local_h if local_h is not None else min(h, eps / 10))
    fem = minimize_lambda(mesh, (2, 2)).value
    ritz = enriched_ritz(mesh, radius if radius is not None else max(3 * eps, 0.2)).value
    return ToothStudy(eps, h, fem, ritz, mesh.n_triangles, len(mesh.seams))
