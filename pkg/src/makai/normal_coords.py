"""Smooth strictly convex planar bodies in normal coordinates.

A boundary point ``x = gamma(s)`` and a depth ``t`` give the interior point
``x + t nu(s)`` (``nu`` the inward unit normal).  Along the normal the
point keeps ``x`` as its nearest boundary point up to the cut distance
``l(s)``, and the area element becomes ``(1 - t kappa(s)) |gamma'(s)| ds dt``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import minimize, minimize_scalar

from .constants import Weight1D, hp_constant, mu_p_numeric
from .errors import DomainError, GeometryError
from .spectral.audit import InequalityReport
from .spectral.fem import minimize_lambda
from .spectral.mesh import mesh_polygon

TWO_PI = 2 * math.pi
N_SAMPLES = 4096


@dataclass(eq=False)
class SmoothBody2D:
    """Counter-clockwise C^2 boundary ``gamma`` on [0, 2 pi) with derivatives."""

    gamma: Callable
    d1: Callable
    d2: Callable
    name: str = "body"
    n_samples: int = N_SAMPLES
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        s = np.linspace(0, TWO_PI, 257)[:-1]
        if np.linalg.norm(self.point(0.0) - self.point(TWO_PI)) > 1e-12 * (1 + self.scale):
            raise GeometryError("boundary curve is not closed")
        if np.any(self.curvature(s) <= 0):
            raise GeometryError("body is not strictly convex (or not counter-clockwise)")
        c = self.samples.mean(axis=0)
        s16 = np.linspace(0, TWO_PI, 17)[:-1]
        if np.any(np.einsum("ij,ij->i", c - self.point(s16), self.normal(s16)) <= 0):
            raise GeometryError("normals do not point inward")

    # -- evaluators ------------------------------------------------------

    def point(self, s) -> np.ndarray:
        return np.asarray(self.gamma(s), dtype=float).T

    def tangent(self, s) -> np.ndarray:
        return np.asarray(self.d1(s), dtype=float).T

    def speed(self, s):
        v = np.linalg.norm(self.tangent(s), axis=-1)
        if np.any(v < 1e-12):
            raise GeometryError("degenerate parametrization: |gamma'| < 1e-12")
        return v

    def normal(self, s) -> np.ndarray:
        t = self.tangent(s)
        v = self.speed(s)
        n = np.stack([-t[..., 1], t[..., 0]], axis=-1)
        return n / np.asarray(v)[..., None]

    def curvature(self, s):
        """Signed curvature (x'y'' - y'x'') / |gamma'|^3."""
        t = self.tangent(s)
        a = np.asarray(self.d2(s), dtype=float).T
        v = self.speed(s)
        return (t[..., 0] * a[..., 1] - t[..., 1] * a[..., 0]) / v**3

    # -- derived geometry ------------------------------------------------

    @property
    def samples(self) -> np.ndarray:
        if "samples" not in self._cache:
            s = TWO_PI * np.arange(self.n_samples) / self.n_samples
            self._cache["s"] = s
            self._cache["samples"] = self.point(s)
        return self._cache["samples"]

    @property
    def scale(self) -> float:
        s = np.linspace(0, TWO_PI, 64, endpoint=False)
        return float(np.max(np.abs(self.point(s))))

    @property
    def diameter(self) -> float:
        if "diameter" not in self._cache:
            pts = self.samples[:: max(1, self.n_samples // 1024)]
            d = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
            self._cache["diameter"] = float(d.max()) * (1 + 1e-6)
        return self._cache["diameter"]

    def distance(self, z) -> float:
        """Distance from ``z`` to the boundary curve.

        Local minima of the sampled distance are refined on the curve with a
        bounded scalar minimization between the neighbouring samples.
        """
        z = np.asarray(z, dtype=float)
        pts = self.samples
        s = self._cache["s"]
        d2 = np.sum((pts - z) ** 2, axis=1)
        left, right = np.roll(d2, 1), np.roll(d2, -1)
        cand = np.flatnonzero((d2 <= left) & (d2 <= right))
        ds = TWO_PI / self.n_samples
        best = math.inf
        for i in cand:
            f = lambda u: float(np.sum((self.point(u) - z) ** 2))
            res = minimize_scalar(f, bounds=(s[i] - ds, s[i] + ds), method="bounded",
                                  options={"xatol": 1e-13})
            best = min(best, res.fun, d2[i])
        return math.sqrt(best)

    def contains(self, z) -> bool:
        """Convexity: inside iff on the inner side of the nearest tangent line."""
        z = np.asarray(z, dtype=float)
        i = int(np.argmin(np.sum((self.samples - z) ** 2, axis=1)))
        s = self._cache["s"][i]
        return float((z - self.point(s)) @ self.normal(s)) > 0

    def inradius(self):
        """Maximum of the (concave) distance function, with its location."""
        if "inradius" not in self._cache:
            c = self.samples.mean(axis=0)
            res = minimize(lambda z: -self.distance(z) if self.contains(z) else 0.0, c,
                           method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000})
            self._cache["inradius"] = (-float(res.fun), res.x)
        return self._cache["inradius"]

    def polygon(self, n: int) -> np.ndarray:
        """Inscribed polygon through ``n`` equally spaced parameter values."""
        return self.point(TWO_PI * np.arange(n) / n)

    def area(self, n: int = 8192) -> float:
        """Shoelace area of a fine inscribed polygon (cross-check only)."""
        v = self.polygon(n)
        return 0.5 * float(np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]))


def circle(R: float = 1.0, center=(0.0, 0.0)) -> SmoothBody2D:
    if not R > 0:
        raise DomainError("radius must be positive")
    cx, cy = center
    return SmoothBody2D(
        lambda s: (cx + R * np.cos(s), cy + R * np.sin(s)),
        lambda s: (-R * np.sin(s), R * np.cos(s)),
        lambda s: (-R * np.cos(s), -R * np.sin(s)),
        name=f"circle(R={R:g})")


def ellipse(a: float = 2.0, b: float = 1.0) -> SmoothBody2D:
    if not (a > 0 and b > 0):
        raise DomainError("semi-axes must be positive")
    return SmoothBody2D(
        lambda s: (a * np.cos(s), b * np.sin(s)),
        lambda s: (-a * np.sin(s), b * np.cos(s)),
        lambda s: (-a * np.cos(s), -b * np.sin(s)),
        name=f"ellipse(a={a:g},b={b:g})")


def tabulated_body(points, name: str = "tabulated") -> SmoothBody2D:
    """Periodic cubic spline through boundary points (counter-clockwise, not closed)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 5:
        raise DomainError("need at least 5 planar boundary points")
    seg = np.linalg.norm(np.diff(np.vstack([pts, pts[:1]]), axis=0), axis=1)
    knots = np.concatenate([[0.0], np.cumsum(seg)])
    knots *= TWO_PI / knots[-1]
    spline = CubicSpline(knots, np.vstack([pts, pts[:1]]), bc_type="periodic")
    wrap = lambda s: np.mod(s, TWO_PI)
    return SmoothBody2D(
        lambda s: spline(wrap(s)).T,
        lambda s: spline(wrap(s), 1).T,
        lambda s: spline(wrap(s), 2).T,
        name=name)


# ---------------------------------------------------------------------------
# cut distance and change of variables


@dataclass(frozen=True)
class CutDistance:
    value: float
    ok: bool
    residual: float

    def __float__(self):
        return self.value


def cut_distance(body: SmoothBody2D, s: float, tol: float = 1e-9, *, full_output: bool = False):
    """Largest ``t`` with d(gamma(s) + t nu(s)) = t, by bisection.

    The bracket is [0, min(diam, 1 / kappa(s))].

    ``ok`` is False (and the value 0) when no positive depth passes the
    predicate, which signals a tolerance below the distance accuracy.
    """
    x = body.point(s)
    nu = body.normal(s)
    slack = 1e-12 * body.scale

    def keeps_foot(t):
        return body.distance(x + t * nu) >= t - slack

    # the foot is lost beyond the centre of curvature, so l <= 1 / kappa
    lo, hi = 0.0, min(body.diameter, 1.0 / float(body.curvature(s)))
    if not keeps_foot(min(tol, hi)):
        res = CutDistance(0.0, False, math.nan)
        return res if full_output else res.value
    lo = min(tol, hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if keeps_foot(mid):
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    res = CutDistance(t, True, abs(body.distance(x + t * nu) - t))
    return res if full_output else res.value


def cut_distances(body: SmoothBody2D, s, tol: float = 1e-9) -> np.ndarray:
    return np.array([cut_distance(body, float(si), tol) for si in np.atleast_1d(s)])


def cov_integral(body: SmoothBody2D, h: Callable, n_s: int = 512, n_t: int = 512,
                 tol: float = 1e-10) -> float:
    """int_body h through normal coordinates, composite midpoint in s and t.

    ``h`` takes an (m, 2) array of points and returns m values.
    """
    s = (np.arange(n_s) + 0.5) * (TWO_PI / n_s)
    ell = cut_distances(body, s, tol)
    kappa = body.curvature(s)
    speed = body.speed(s)
    x = body.point(s)
    nu = body.normal(s)
    u = (np.arange(n_t) + 0.5) / n_t
    total = 0.0
    for k in range(n_s):
        t = u * ell[k]
        z = x[k] + t[:, None] * nu[k]
        vals = np.asarray(h(z), dtype=float) * (1 - t * kappa[k])
        total += vals.sum() * (ell[k] / n_t) * speed[k]
    return total * (TWO_PI / n_s)


# ---------------------------------------------------------------------------
# inequality checks


def normal_weight(body: SmoothBody2D, s: float, tol: float = 1e-9) -> Weight1D:
    """w(t) = 1 - t kappa(s) on (0, l(s))."""
    ell = cut_distance(body, s, tol)
    if ell <= 0:
        raise DomainError("cut distance could not be resolved")
    k = float(body.curvature(s))
    return Weight1D(ell, lambda t: 1 - t * k, monotone=True)


def weighted_quotient_check(body: SmoothBody2D, s: float, p: float, n: int = 2000,
                            rel_disc: float = 1e-3) -> InequalityReport:
    """mu_p(1) <= mu_p(w_s) on (0, l(s)), both from the 1D solver."""
    w = normal_weight(body, s)
    mu_w = mu_p_numeric(w, p, n)
    mu_1 = mu_p_numeric(Weight1D.constant(w.length), p, n)
    return InequalityReport(
        f"weighted_quotient[{body.name},s={s:g},p={p:g}]", mu_1, mu_w, "le", rel_disc,
        "mu_p(1, (0, l)) numeric", "mu_p(1 - t kappa, (0, l)) numeric",
        {"length": w.length, "curvature": float(body.curvature(s))})


def hp_smooth_check(body: SmoothBody2D, p: float, n_poly: int = 128, h: float | None = None,
                    inradius: float | None = None) -> InequalityReport:
    """(pi_p/2)^p / r^p against the P1 bound on an inscribed polygon.

    The polygon lies inside the body, so its eigenvalue bound is also an
    upper bound for the body.
    """
    if not p > 1:
        raise DomainError("p must exceed 1")
    r = inradius if inradius is not None else body.inradius()[0]
    poly = body.polygon(n_poly)
    if h is None:
        h = 0.05 * body.diameter
    res = minimize_lambda(mesh_polygon(poly, h), (p, p))
    return InequalityReport(
        f"hp_smooth[{body.name},p={p:g}]", hp_constant(p) / r**p, res.value, "le", 1e-9,
        f"(pi_p/2)^p / r^p, r = {r:.10g}", f"P1 {res.method} on inscribed {n_poly}-gon",
        {"inradius": r})
