"""Piecewise-linear Rayleigh quotients and their minimization.

Every nodal field vanishing on the fixed nodes is, once extended by zero, an
admissible Sobolev test function on the meshed domain.  The quotient

    R(u) = int |grad u|^p / (int |u|^q)^(p/q)

is evaluated exactly (constant gradients; |u|^q integrated after cutting
each triangle along u = 0), so ``R(u)`` is a certified upper bound for
lambda_{p,q} of any domain containing the mesh.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ..constants import as_pair
from ..errors import DomainError
from ..kernels import linear_power_integrals
from .mesh import TriangleMesh

log = logging.getLogger(__name__)

# degree-5 seven-point rule on the reference triangle (barycentric, weights sum to 1)
_a1, _b1 = 0.059715871789770, 0.470142064105115
_a2, _b2 = 0.797426985353087, 0.101286507323456
_QUAD_BARY = np.array([
    [1 / 3, 1 / 3, 1 / 3],
    [_a1, _b1, _b1], [_b1, _a1, _b1], [_b1, _b1, _a1],
    [_a2, _b2, _b2], [_b2, _a2, _b2], [_b2, _b2, _a2],
])
_QUAD_W = np.array([0.225] + [0.132394152788506] * 3 + [0.125939180544827] * 3)


def _tri_area(P, Q, R):
    d1 = Q - P
    d2 = R - P
    return 0.5 * np.abs(d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])


def abs_power_integral(mesh: TriangleMesh, u, q: float) -> float:
    """Exact ``int |u|^q`` of a P1 field."""
    v = np.asarray(u, dtype=float)[mesh.triangles]
    X = mesh.nodes[mesh.triangles]
    nonneg = v >= 0
    cnt = nonneg.sum(axis=1)
    same = (cnt == 0) | (cnt == 3)
    vols = [mesh.areas[same]]
    vals = [np.abs(v[same])]
    mixed = np.flatnonzero(~same)
    if mixed.size:
        vm, Xm, cm = v[mixed], X[mixed], cnt[mixed]
        lone = np.where(cm == 1, np.argmax(nonneg[mixed], axis=1), np.argmin(nonneg[mixed], axis=1))
        rows = np.arange(mixed.size)
        o1, o2 = (lone + 1) % 3, (lone + 2) % 3
        vl, v1, v2 = vm[rows, lone], vm[rows, o1], vm[rows, o2]
        Xl, X1, X2 = Xm[rows, lone], Xm[rows, o1], Xm[rows, o2]
        t1 = vl / (vl - v1)
        t2 = vl / (vl - v2)
        P1 = Xl + t1[:, None] * (X1 - Xl)
        P2 = Xl + t2[:, None] * (X2 - Xl)
        z = np.zeros_like(vl)
        vols += [_tri_area(Xl, P1, P2), _tri_area(P1, X1, X2), _tri_area(P1, X2, P2)]
        vals += [np.column_stack([np.abs(vl), z, z]),
                 np.column_stack([z, np.abs(v1), np.abs(v2)]),
                 np.column_stack([z, np.abs(v2), z])]
    terms = linear_power_integrals(np.concatenate(vols), np.vstack(vals), q)
    return math.fsum(terms)


def gradient_power_integral(mesh: TriangleMesh, u, p: float) -> float:
    g = np.einsum("tkd,tk->td", mesh.gradients, np.asarray(u, dtype=float)[mesh.triangles])
    return math.fsum(mesh.areas * np.linalg.norm(g, axis=1) ** p)


def rayleigh_pq(mesh: TriangleMesh, u, e) -> float:
    """Exact Rayleigh quotient of the P1 field ``u`` (fixed nodes must be 0)."""
    e = as_pair(e)
    u = np.asarray(u, dtype=float)
    if np.any(u[mesh.fixed] != 0):
        raise DomainError("field must vanish on fixed nodes")
    den = abs_power_integral(mesh, u, e.q)
    if den <= 0:
        raise DomainError("zero field has no Rayleigh quotient")
    return gradient_power_integral(mesh, u, e.p) / den ** (e.p / e.q)


def _assemble(mesh: TriangleMesh, weights=None):
    """Stiffness (optionally with per-triangle weights) and mass matrices."""
    G = mesh.gradients
    w = mesh.areas if weights is None else mesh.areas * weights
    Kloc = np.einsum("tid,tjd->tij", G, G) * w[:, None, None]
    I = np.repeat(mesh.triangles, 3, axis=1).ravel()
    J = np.tile(mesh.triangles, (1, 3)).ravel()
    n = mesh.n_nodes
    K = sp.csr_matrix((Kloc.ravel(), (I, J)), shape=(n, n))
    return K


def stiffness_matrix(mesh: TriangleMesh, weights=None) -> sp.csr_matrix:
    return _assemble(mesh, weights)


def mass_matrix(mesh: TriangleMesh) -> sp.csr_matrix:
    loc = (np.ones((3, 3)) + np.eye(3)) / 12.0
    Mloc = loc[None] * mesh.areas[:, None, None]
    I = np.repeat(mesh.triangles, 3, axis=1).ravel()
    J = np.tile(mesh.triangles, (1, 3)).ravel()
    n = mesh.n_nodes
    return sp.csr_matrix((Mloc.ravel(), (I, J)), shape=(n, n))


def load_vector(mesh: TriangleMesh) -> np.ndarray:
    F = np.zeros(mesh.n_nodes)
    np.add.at(F, mesh.triangles.ravel(), np.repeat(mesh.areas / 3.0, 3))
    return F


def _restrict(A, free):
    return A[free][:, free].tocsc()


@dataclass
class LambdaResult:
    """Certified upper bound ``value`` and the field that realizes it."""

    value: float
    u: np.ndarray
    converged: bool
    iterations: int
    method: str
    history: list = field(default_factory=list, repr=False)

    def __float__(self):
        return float(self.value)

    def __iter__(self):
        return iter((self.value, self.u))


def inverse_iteration(mesh: TriangleMesh, tol: float = 1e-10, max_iter: int = 5000, u0=None):
    """First Dirichlet eigenpair by inverse power iteration on (K, M)."""
    free = mesh.free
    K = _restrict(stiffness_matrix(mesh), free)
    M = _restrict(mass_matrix(mesh), free)
    lu = splu(K)
    x = np.ones(free.size) if u0 is None else np.asarray(u0, dtype=float)[free]
    lam_old = math.inf
    history = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        y = lu.solve(M @ x)
        y /= math.sqrt(y @ (M @ y))
        lam = float(y @ (K @ y))
        history.append(lam)
        x = y
        if abs(lam_old - lam) <= tol * lam:
            converged = True
            break
        lam_old = lam
    u = np.zeros(mesh.n_nodes)
    u[free] = x if x.sum() >= 0 else -x
    return u, converged, it, history


def torsion_solve(mesh: TriangleMesh) -> np.ndarray:
    """P1 torsion function: K w = F with zero data on fixed nodes."""
    free = mesh.free
    K = _restrict(stiffness_matrix(mesh), free)
    F = load_vector(mesh)[free]
    w = np.zeros(mesh.n_nodes)
    w[free] = splu(K).solve(F)
    return w


def _abs_power_gradient(mesh, u, q):
    """Quadrature approximation of d/du_k int |u|^q (7-point rule)."""
    v = u[mesh.triangles]
    vals = v @ _QUAD_BARY.T  # (m, 7)
    dens = q * np.abs(vals) ** (q - 1) * np.sign(vals)
    loc = (dens * _QUAD_W) @ _QUAD_BARY * mesh.areas[:, None]  # (m, 3)
    g = np.zeros(mesh.n_nodes)
    np.add.at(g, mesh.triangles.ravel(), loc.ravel())
    return g


def _grad_power_gradient(mesh, u, p):
    G = mesh.gradients
    gu = np.einsum("tkd,tk->td", G, u[mesh.triangles])
    norm = np.linalg.norm(gu, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        coef = np.where(norm > 0, p * norm ** (p - 2), 0.0) if p < 2 else p * norm ** (p - 2)
    loc = np.einsum("tkd,td->tk", G, gu) * (coef * mesh.areas)[:, None]
    g = np.zeros(mesh.n_nodes)
    np.add.at(g, mesh.triangles.ravel(), loc.ravel())
    return g, norm


def descend_pq(mesh: TriangleMesh, e, u0, *, max_iter: int = 2000, tol: float = 1e-10,
               check_monotone: bool = True):
    """Preconditioned normalized (sub)gradient descent on log R(u).

    Each step solves with the linearized p-Laplacian stiffness (gradient
    magnitudes frozen, floored at 1e-3 of their maximum) and backtracks until
    the exact quotient decreases, so the accepted values never increase.
    """
    e = as_pair(e)
    p, q = e.p, e.q
    free = mesh.free
    u = mesh.field(u0)
    u /= np.max(np.abs(u))

    def objective(v):
        den = abs_power_integral(mesh, v, q)
        if den <= 0:
            return math.inf
        return math.log(gradient_power_integral(mesh, v, p)) - (p / q) * math.log(den)

    f = objective(u)
    history = [math.exp(f)]
    step = 0.5
    quiet = 0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        gn, norm = _grad_power_gradient(mesh, u, p)
        num = gradient_power_integral(mesh, u, p)
        den = abs_power_integral(mesh, u, q)
        g = gn / num - (p / q) * _abs_power_gradient(mesh, u, q) / den
        floor = 1e-3 * max(norm.max(), 1e-300)
        wts = np.maximum(norm, floor) ** (p - 2)
        A = _restrict(stiffness_matrix(mesh, wts), free)
        d = np.zeros(mesh.n_nodes)
        d[free] = -splu(A).solve(g[free])
        dmax = np.max(np.abs(d))
        if dmax == 0:
            converged = True
            break
        d /= dmax
        while step > 1e-14:
            trial = u + step * d
            ft = objective(trial)
            if ft < f:
                break
            step *= 0.5
        else:
            converged = True
            break
        drop = f - ft
        u = trial / np.max(np.abs(trial))
        f = ft
        history.append(math.exp(f))
        if check_monotone and history[-1] > history[-2]:
            raise AssertionError("descent increased the Rayleigh quotient")
        step = min(2 * step, 1.0)
        quiet = quiet + 1 if drop < tol else 0
        if quiet >= 5:
            converged = True
            break
    return u, converged, it, history


def minimize_lambda(mesh: TriangleMesh, e, *, tol: float = 1e-10, max_iter: int | None = None) -> LambdaResult:
    """Upper bound of lambda_{p,q} over the P1 space of ``mesh``.

    * (2, 2): inverse power iteration on the stiffness/mass pencil.
    * (2, 1): one linear solve for the torsion function, lambda = 1 / T.
    * otherwise: :func:`descend_pq` started from the (2, 2) eigenvector.

    The reported value is always the exact quotient of the returned field.
    """
    e = as_pair(e)
    if mesh.free.size == 0:
        raise DomainError("mesh has no free nodes")
    if (e.p, e.q) == (2.0, 2.0):
        u, conv, it, hist = inverse_iteration(mesh, tol=tol, max_iter=max_iter or 5000)
        method = "inverse-iteration"
    elif (e.p, e.q) == (2.0, 1.0):
        u = torsion_solve(mesh)
        conv, it, hist, method = True, 1, [], "torsion-solve"
    else:
        u0, _, _, _ = inverse_iteration(mesh, tol=1e-8)
        u, conv, it, hist = descend_pq(mesh, e, np.abs(u0), max_iter=max_iter or 2000, tol=tol)
        method = "subgradient-descent"
    if not conv:
        log.warning("minimize_lambda(%s) stopped before convergence", method)
    value = rayleigh_pq(mesh, u, e)
    return LambdaResult(value, u, conv, it, method, hist)
