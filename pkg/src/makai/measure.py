"""Moments of the distance function and the lower-bound functionals.

On a convex polytope the distance function restricted to a facet cell is
the affine slack of that facet, so

    int_P d^alpha = sum_i sum_{T in cell_i} int_T (b_i - a_i . x)^alpha dx

and every term is an exact simplex integral of a power of an affine
function.  A Monte Carlo estimate serves as the independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import ExponentPair, as_pair, c_pq, hp_constant, pi_pq
from .errors import DomainError
from .geometry import Polytope, Simplex, inradius, triangulate
from .kernels import linear_power_integrals, symmetric_power_integrals


@dataclass(frozen=True)
class MomentResult:
    alpha: float
    value: float
    method: str
    error: float = 0.0

    def __float__(self):
        return float(self.value)


def simplex_linear_power(T, values, alpha: float) -> float:
    """int_T l^alpha for the affine ``l`` with the given vertex values.

    Integer exponents go through complete homogeneous symmetric
    polynomials, real ones through a confluent divided difference.
    """
    if not isinstance(T, Simplex):
        T = Simplex(np.asarray(T, dtype=float))
    v = np.asarray(values, dtype=float).reshape(1, -1)
    if v.shape[1] != T.vertices.shape[0]:
        raise DomainError("one value per simplex vertex is required")
    if np.any(v < 0):
        raise DomainError("vertex values must be nonnegative")
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    if float(alpha).is_integer():
        return float(symmetric_power_integrals([T.volume], v, int(alpha))[0])
    return float(linear_power_integrals([T.volume], v, alpha)[0])


def _cell_batches(P: Polytope):
    """Volumes and slack values of every simplex of every facet cell."""
    vols, vals = [], []
    for cell in P.cells:
        for S in triangulate(cell):
            vols.append(S.volume)
            vals.append(cell.depth(S.vertices))
    return np.array(vols), np.array(vals)


def distance_moment(P: Polytope, alpha: float) -> MomentResult:
    """Exact ``int_P d_P^alpha`` through the nearest-facet partition."""
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    vols, vals = _cell_batches(P)
    terms = linear_power_integrals(vols, vals, alpha, clip_tol=1e-9)
    return MomentResult(float(alpha), math.fsum(terms), "exact", 0.0)


def _sample_inside(P: Polytope, n: int, rng, batch: int = 1 << 18):
    lo = P.vertices.min(axis=0)
    hi = P.vertices.max(axis=0)
    chunks, have = [], 0
    while have < n:
        x = rng.uniform(lo, hi, size=(batch, P.dimension))
        x = x[P.contains(x, tol=0.0)]
        chunks.append(x)
        have += len(x)
    return np.concatenate(chunks)[:n]


def monte_carlo_moment(P: Polytope, alpha, n: int = 1_000_000, seed: int = 0):
    """Rejection-sampling estimate of the moment with its standard error.

    ``alpha`` may be a sequence; the same sample is reused for every value.
    """
    rng = np.random.default_rng(seed)
    x = _sample_inside(P, n, rng)
    d = np.maximum(P.slacks(x).min(axis=1), 0.0)
    vol = P.volume
    out = []
    for a in np.atleast_1d(alpha):
        f = d ** a
        out.append(MomentResult(float(a), vol * f.mean(), "monte-carlo",
                                vol * f.std(ddof=1) / math.sqrt(len(f))))
    return out if np.ndim(alpha) else out[0]


def moment_upper_bound(P: Polytope, alpha: float) -> float:
    """|P| r^alpha / (alpha + 1)."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    r, _ = inradius(P)
    return P.volume * r**alpha / (alpha + 1)


def makai_lower_bound(P: Polytope, e) -> float:
    """C_{p,q} / (int d^(pq/(p-q)))^((p-q)/q); (pi_p/2)^p / r^p on the diagonal."""
    e = as_pair(e)
    if e.uses_inradius:
        r, _ = inradius(P)
        return hp_constant(e.p) / r**e.p
    m = distance_moment(P, e.moment_exponent).value
    return c_pq(e) / m ** ((e.p - e.q) / e.q)


def hersch_protter_bound(P: Polytope, e) -> float:
    """(pi_{p,q}/2)^p / (|P|^((p-q)/q) r^p)."""
    e = as_pair(e)
    r, _ = inradius(P)
    return (pi_pq(e) / 2.0) ** e.p / (P.volume ** ((e.p - e.q) / e.q) * r**e.p)


def slab_moment_asymptote(L: float, alpha: float, dim: int = 2) -> float:
    """Leading term L^(N-1) (1/2)^alpha / (alpha + 1) of the slab moment."""
    return L ** (dim - 1) * 0.5**alpha / (alpha + 1)
