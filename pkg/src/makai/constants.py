"""One-dimensional sharp constants and their numerical oracles.

``pi_pq`` is the sharp constant of the one-dimensional Poincare-Sobolev
inequality on (0, 1) with zero boundary values,

    pi_{p,q} = inf { ||u'||_p : ||u||_q = 1, u(0) = u(1) = 0 },

and ``c_pq`` is the Makai constant built from it.  The numeric routines
minimize the corresponding quotients over continuous piecewise-linear
functions; the value they return is the exact quotient of the returned
function, so it is an upper bound of the continuum infimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg
import scipy.special

from .errors import DomainError, UnsupportedExponentError
from .kernels import linear_power_integrals

#: above this moment exponent pq/(p-q) the q = p branch is used instead
ALPHA_BLOWUP = 1e6


@dataclass(frozen=True)
class ExponentPair:
    """Admissible exponent pair: ``1 <= q < p < inf`` or ``1 < q = p < inf``."""

    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (math.isfinite(p) and math.isfinite(q)):
            raise DomainError(f"exponents must be finite, got ({p}, {q})")
        if not 1 <= q <= p:
            raise DomainError(f"need 1 <= q <= p, got ({p}, {q})")
        if q == p and p <= 1:
            raise DomainError("q = p requires p > 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def diagonal(self) -> bool:
        return self.q == self.p

    @property
    def conjugate(self) -> float:
        """Hoelder conjugate p' = p / (p - 1) (infinite for p = 1)."""
        return math.inf if self.p == 1 else self.p / (self.p - 1)

    @property
    def moment_exponent(self) -> float:
        """alpha = pq / (p - q), the distance power in the Makai bound."""
        if self.diagonal:
            return math.inf
        return self.p * self.q / (self.p - self.q)

    @property
    def uses_inradius(self) -> bool:
        """True when the bound should use r^p instead of the moment."""
        return self.diagonal or self.moment_exponent > ALPHA_BLOWUP

    def __iter__(self):
        return iter((self.p, self.q))


def as_pair(e) -> ExponentPair:
    if isinstance(e, ExponentPair):
        return e
    p, q = e
    return ExponentPair(p, q)


@dataclass(frozen=True)
class Weight1D:
    """Positive weight on (0, L); ``monotone`` tags it as non-increasing."""

    length: float
    func: Callable[[np.ndarray], np.ndarray]
    monotone: bool = False

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError("weight interval length must be positive")

    def __call__(self, t):
        return np.asarray(self.func(np.asarray(t, dtype=float)), dtype=float) * np.ones_like(t, dtype=float)

    @classmethod
    def constant(cls, length: float = 1.0, value: float = 1.0) -> "Weight1D":
        return cls(length, lambda t: np.full_like(t, value, dtype=float), monotone=True)

    @classmethod
    def steps(cls, length, breaks, levels) -> "Weight1D":
        """Piecewise-constant weight; ``levels[k]`` holds on ``[breaks[k-1], breaks[k])``."""
        breaks = np.asarray(breaks, dtype=float)
        levels = np.asarray(levels, dtype=float)
        if levels.size != breaks.size + 1:
            raise DomainError("need len(levels) == len(breaks) + 1")
        mono = bool(np.all(np.diff(levels) <= 0))
        return cls(length, lambda t: levels[np.searchsorted(breaks, t, side="right")], monotone=mono)


# ---------------------------------------------------------------------------
# closed forms


def beta(a: float, b: float) -> float:
    """Euler Beta function B(a, b) for positive arguments."""
    if not (a > 0 and b > 0):
        raise DomainError(f"beta needs positive arguments, got ({a}, {b})")
    return float(scipy.special.beta(a, b))


def pi_pq(e) -> float:
    """Closed form of pi_{p,q} through the Beta function."""
    e = as_pair(e)
    if e.p == 1:
        raise UnsupportedExponentError("pi_{p,q} closed form needs p > 1")
    p, q, pc = e.p, e.q, e.conjugate
    return (
        (2.0 / q)
        * (1.0 + q / pc) ** (1.0 / q)
        * (1.0 + pc / q) ** (-1.0 / p)
        * beta(1.0 / q, 1.0 / pc)
    )


def pi_p(p: float) -> float:
    return pi_pq(ExponentPair(p, p))


def c_pq(e) -> float:
    """Makai constant C_{p,q}; equals (pi_p / 2)^p on the diagonal."""
    e = as_pair(e)
    if e.p == 1:
        raise UnsupportedExponentError("C_{p,q} needs p > 1")
    p, q = e.p, e.q
    head = (pi_pq(e) / 2.0) ** p
    if e.diagonal:
        return head
    return head * ((p - q) / (p * q + p - q)) ** ((p - q) / q)


# ---------------------------------------------------------------------------
# piecewise-linear oracles

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(5)
_GAUSS_X = 0.5 * (_GAUSS_X + 1.0)
_GAUSS_W = 0.5 * _GAUSS_W


def abs_power_cells(u, h, q):
    """Exact ``int |u|^q`` on each cell of a uniform grid, u piecewise linear."""
    a, b = u[:-1], u[1:]
    same = a * b >= 0
    out = np.empty(a.shape)
    if np.any(same):
        vals = np.abs(np.column_stack([a[same], b[same]]))
        out[same] = linear_power_integrals(np.full(vals.shape[0], h), vals, q)
    cross = ~same
    if np.any(cross):
        aa, bb = np.abs(a[cross]), np.abs(b[cross])
        t = aa / (aa + bb)
        out[cross] = h * (t * aa**q + (1 - t) * bb**q) / (q + 1)
    return out


@dataclass
class DescentResult:
    """Outcome of a one-dimensional quotient minimization."""

    value: float
    u: np.ndarray
    converged: bool
    iterations: int
    history: list = field(default_factory=list, repr=False)

    def __float__(self):
        return float(self.value)


class _Quotient1D:
    """log of  (sum w |u'|^p h)^(1/p) / (sum w int|u|^q)^(1/q)  on a uniform grid."""

    def __init__(self, n, length, p, q, weights, fixed):
        self.n, self.h, self.p, self.q = n, length / n, p, q
        self.w = weights
        self.fixed = fixed
        self.free = np.flatnonzero(~fixed)

    def precondition(self, u, g):
        """Solve with the linearized p-Laplacian (frozen |u'|^(p-2) weights)."""
        slope = np.abs(np.diff(u)) / self.h
        floor = 1e-3 * max(slope.max(), 1e-300)
        c = self.w * np.maximum(slope, floor) ** (self.p - 2) / self.h
        diag = np.zeros(self.n + 1)
        diag[:-1] += c
        diag[1:] += c
        off = np.zeros(self.n + 1)
        off[1:] = -c
        free = self.free
        ab = np.vstack([off[free], diag[free]])
        ab[0, 0] = 0.0
        # free nodes are contiguous, so the banded structure survives
        out = np.zeros_like(u)
        out[free] = scipy.linalg.solveh_banded(ab, g[free])
        return out

    def parts(self, u):
        slope = np.diff(u) / self.h
        num = np.sum(self.w * self.h * np.abs(slope) ** self.p)
        den = np.sum(self.w * abs_power_cells(u, self.h, self.q))
        return num, den

    def log_value(self, u):
        num, den = self.parts(u)
        if den <= 0 or num <= 0:
            return math.inf
        return math.log(num) / self.p - math.log(den) / self.q

    def gradient(self, u):
        p, q, h = self.p, self.q, self.h
        num, den = self.parts(u)
        slope = np.diff(u) / h
        flux = self.w * p * np.abs(slope) ** (p - 1) * np.sign(slope)
        gnum = np.zeros_like(u)
        gnum[1:] += flux
        gnum[:-1] -= flux
        # Gauss quadrature for the subgradient of int |u|^q
        vals = u[:-1, None] * (1 - _GAUSS_X) + u[1:, None] * _GAUSS_X
        dens = q * np.abs(vals) ** (q - 1) * np.sign(vals) * self.w[:, None] * h
        gden = np.zeros_like(u)
        gden[:-1] += dens @ (_GAUSS_W * (1 - _GAUSS_X))
        gden[1:] += dens @ (_GAUSS_W * _GAUSS_X)
        return gnum / (p * num) - gden / (q * den)

    def descend(self, u0, max_iter, tol):
        u = u0.copy()
        u[self.fixed] = 0.0
        u /= np.max(np.abs(u))
        f = self.log_value(u)
        history = [f]
        step = 0.5
        quiet = 0
        it = 0
        converged = False
        for it in range(1, max_iter + 1):
            g = self.gradient(u)
            d = -self.precondition(u, g)
            dmax = np.max(np.abs(d))
            if dmax == 0:
                converged = True
                break
            d /= dmax
            while step > 1e-16:
                trial = u + step * d
                ft = self.log_value(trial)
                if ft < f:
                    break
                step *= 0.5
            else:
                converged = True
                break
            drop = f - ft
            u = trial / np.max(np.abs(trial))
            f = ft
            history.append(f)
            step = min(2.0 * step, 1.0)
            quiet = quiet + 1 if drop < tol else 0
            if quiet >= 5:
                converged = True
                break
        return u, f, converged, it, history


def _minimize_1d(quot, starts, max_iter, tol):
    best = None
    for u0 in starts:
        u, f, conv, it, hist = quot.descend(u0, max_iter, tol)
        if best is None or f < best[1]:
            best = (u, f, conv, it, hist)
    return best


def pi_pq_numeric(
    e,
    n: int = 2000,
    *,
    restarts: int = 5,
    seed: int = 42,
    max_iter: int = 50_000,
    tol: float = 1e-10,
    full_output: bool = False,
):
    """Discrete upper bound of pi_{p,q} on a uniform ``n``-cell grid.

    Minimizes ``||u'||_p / ||u||_q`` over piecewise-linear ``u`` vanishing
    at both ends by preconditioned, normalized (sub)gradient descent with
    backtracking, from ``restarts`` starting points (the first is a smooth
    bump, the rest are seeded random).  The returned value is the exact
    quotient of the best iterate.

    Returns a float, or a :class:`DescentResult` when ``full_output``.
    """
    e = as_pair(e)
    if n < 16:
        raise DomainError("grid size must be at least 16")
    fixed = np.zeros(n + 1, bool)
    fixed[[0, -1]] = True
    quot = _Quotient1D(n, 1.0, e.p, e.q, np.ones(n), fixed)
    x = np.linspace(0.0, 1.0, n + 1)
    rng = np.random.default_rng(seed)
    starts = [np.sin(np.pi * x)] + [rng.random(n + 1) for _ in range(max(restarts, 1) - 1)]
    u, f, conv, it, hist = _minimize_1d(quot, starts, max_iter, tol)
    num, den = quot.parts(u)
    value = num ** (1 / e.p) / den ** (1 / e.q)
    res = DescentResult(value, u, conv, it, [math.exp(v) for v in hist])
    return res if full_output else value


def mu_p_numeric(
    w: Weight1D,
    p: float,
    n: int = 2000,
    *,
    restarts: int = 2,
    seed: int = 42,
    max_iter: int = 50_000,
    tol: float = 1e-12,
    full_output: bool = False,
):
    """Discrete weighted Rayleigh quotient with psi(0) = 0 and a free right end.

    Minimizes ``int |psi'|^p w / int |psi|^p w`` over piecewise-linear
    ``psi`` on ``n`` uniform cells of (0, L); the weight is frozen at the
    cell midpoints.
    """
    if not p > 1:
        raise DomainError("mu_p needs p > 1")
    if n < 16:
        raise DomainError("grid size must be at least 16")
    length = float(w.length)
    mid = (np.arange(n) + 0.5) * (length / n)
    weights = w(mid)
    if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
        raise DomainError("weight must be positive at every sample")
    fixed = np.zeros(n + 1, bool)
    fixed[0] = True
    quot = _Quotient1D(n, length, p, p, weights, fixed)
    x = np.linspace(0.0, 1.0, n + 1)
    rng = np.random.default_rng(seed)
    starts = [np.sin(0.5 * np.pi * x)] + [rng.random(n + 1) for _ in range(max(restarts, 1) - 1)]
    u, f, conv, it, hist = _minimize_1d(quot, starts, max_iter, tol)
    num, den = quot.parts(u)
    value = num / den
    res = DescentResult(value, u, conv, it, [math.exp(p * v) for v in hist])
    return res if full_output else value


def hp_constant(p: float) -> float:
    """(pi_p / 2)^p, the Hersch-Protter constant for q = p."""
    return (pi_p(p) / 2.0) ** p
