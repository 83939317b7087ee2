"""Exact integrals of powers of nonnegative affine functions over simplices.

For a simplex ``T`` in ``R^N`` and an affine function ``l`` taking the values
``v_0, ..., v_N >= 0`` at the vertices,

    int_T l^alpha dx = N! |T| * g[v_0, ..., v_N],
    g(t) = t^(alpha + N) / ((alpha + 1) ... (alpha + N)),

where ``g[...]`` is the N-th divided difference.  For integer ``alpha`` the
same integral is ``N! |T| alpha! / (alpha + N)! * h_alpha(v)`` with ``h_k`` the
complete homogeneous symmetric polynomial.  Both routes are vectorized over a
batch of simplices.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

#: values closer than this (relative to the largest vertex value) are merged
CLUSTER_TOL = 1e-7
#: rows whose spread is below this fraction of the maximum use the Taylor route
TAYLOR_SPREAD = 0.05
_TAYLOR_TERMS = 24


def _check_values(values, clip_tol):
    v = np.asarray(values, dtype=float)
    if v.ndim == 1:
        v = v[None, :]
    scale = np.max(np.abs(v), axis=1, keepdims=True)
    neg = v < 0
    if np.any(neg & (v < -clip_tol * np.maximum(scale, 1.0))):
        raise DomainError("vertex values must be nonnegative")
    return np.where(neg, 0.0, v)


def _binom(s, m):
    """Generalized binomial coefficient C(s, m) for real ``s``."""
    out = 1.0
    for j in range(m):
        out *= (s - j) / (j + 1)
    return out


def _taylor_coefficient(alpha, dim, c, m):
    """g^(m)(c) / m! for g(t) = t^(alpha+dim) / prod_k (alpha + k)."""
    denom = math.prod(alpha + k for k in range(1, dim + 1))
    s = alpha + dim
    with np.errstate(divide="ignore", invalid="ignore"):
        power = np.where(c > 0, np.power(np.where(c > 0, c, 1.0), s - m), 0.0 if s - m > 0 else 1.0)
    return _binom(s, m) * power / denom


def complete_homogeneous(values, k):
    """Complete homogeneous symmetric polynomials h_0..h_k of each row.

    Returns an array of shape ``(rows, k + 1)``.
    """
    v = np.atleast_2d(np.asarray(values, dtype=float))
    h = np.zeros((v.shape[0], k + 1))
    h[:, 0] = 1.0
    for col in range(v.shape[1]):
        x = v[:, col]
        for j in range(1, k + 1):
            h[:, j] = h[:, j] + x * h[:, j - 1]
    return h


def symmetric_power_integrals(volumes, values, k: int, clip_tol: float = 0.0):
    """Integral of ``l^k`` for integer ``k >= 0`` via ``h_k``."""
    if k < 0 or int(k) != k:
        raise DomainError("symmetric-polynomial route needs an integer exponent >= 0")
    k = int(k)
    v = _check_values(values, clip_tol)
    dim = v.shape[1] - 1
    vol = np.asarray(volumes, dtype=float).reshape(-1)
    coeff = math.factorial(dim) * math.factorial(k) / math.factorial(k + dim)
    return vol * coeff * complete_homogeneous(v, k)[:, k]


def _divided_difference(x, alpha, dim):
    """N-th divided difference of g over sorted, cluster-merged nodes."""
    denom = math.prod(alpha + k for k in range(1, dim + 1))
    s = alpha + dim
    table = np.power(x, s) / denom
    for level in range(1, dim + 1):
        lo = x[:, :-level]
        hi = x[:, level:]
        gap = hi - lo
        confluent = gap == 0
        with np.errstate(divide="ignore", invalid="ignore"):
            diff = (table[:, 1:] - table[:, :-1]) / np.where(confluent, 1.0, gap)
        deriv = _taylor_coefficient(alpha, dim, lo, level)
        table = np.where(confluent, deriv, diff)
    return table[:, 0]


def _merge_clusters(x, scale):
    """Replace runs of nearly equal sorted nodes by their mean."""
    gaps = np.diff(x, axis=1)
    new = np.concatenate(
        [np.ones((x.shape[0], 1), bool), gaps > CLUSTER_TOL * scale], axis=1
    )
    cid = np.cumsum(new, axis=1) - 1
    out = x.copy()
    for j in range(x.shape[1]):
        mask = cid == j
        cnt = mask.sum(axis=1)
        has = cnt > 1
        if not np.any(has):
            continue
        mean = np.where(mask, x, 0.0).sum(axis=1) / np.maximum(cnt, 1)
        out = np.where(mask & has[:, None], mean[:, None], out)
    return out


def _taylor_route(x, alpha, dim):
    c = x.mean(axis=1)
    delta = x - c[:, None]
    h = complete_homogeneous(delta, _TAYLOR_TERMS)
    total = np.zeros(x.shape[0])
    for j in range(_TAYLOR_TERMS + 1):
        total += _taylor_coefficient(alpha, dim, c, dim + j) * h[:, j]
    return total


def linear_power_integrals(volumes, values, alpha: float, clip_tol: float = 0.0):
    """Integral of ``l^alpha`` over each simplex of a batch.

    Parameters
    ----------
    volumes : array_like, shape (M,)
        Simplex volumes.
    values : array_like, shape (M, N + 1)
        Nonnegative vertex values of the affine integrand.
    alpha : float
        Exponent, ``alpha >= 0``.
    clip_tol : float
        Negative values above ``-clip_tol * max(1, scale)`` are treated as 0
        (round-off on facets); anything more negative raises.

    Returns
    -------
    ndarray, shape (M,)
    """
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    v = _check_values(values, clip_tol)
    vol = np.asarray(volumes, dtype=float).reshape(-1)
    dim = v.shape[1] - 1
    if alpha == 0:
        return vol.copy()
    x = np.sort(v, axis=1)
    scale = x[:, -1].copy()
    out = np.zeros(x.shape[0])
    live = scale > 0
    # homogeneity: work with rows normalized to max 1, restore scale^alpha
    x[live] /= scale[live, None]
    spread = x[:, -1] - x[:, 0]
    taylor = live & (spread <= TAYLOR_SPREAD)
    direct = live & ~taylor
    if np.any(taylor):
        out[taylor] = _taylor_route(x[taylor], alpha, dim)
    if np.any(direct):
        xd = _merge_clusters(x[direct], 1.0)
        out[direct] = _divided_difference(xd, alpha, dim)
    out[live] *= scale[live] ** alpha
    return math.factorial(dim) * vol * out
