"""Inequality reports: exact lower bounds against certified FEM upper bounds."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..constants import as_pair, c_pq, hp_constant
from ..errors import DomainError
from ..geometry import Polytope, inradius, slab
from ..measure import distance_moment, hersch_protter_bound, makai_lower_bound, moment_upper_bound
from .annulus import tooth_study
from .fem import minimize_lambda
from .mesh import TriangleMesh, mesh_polygon

DIRECTIONS = ("le", "lt", "approx")


@dataclass
class InequalityReport:
    """``left`` versus ``right`` with a declared direction.

    ``le`` passes when left/right <= 1 + tolerance, ``lt`` when
    left/right < 1 - tolerance and ``approx`` when |left/right - 1| <=
    tolerance.
    """

    id: str
    left: float
    right: float
    direction: str = "le"
    tolerance: float = 1e-9
    provenance_left: str = ""
    provenance_right: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise DomainError(f"unknown direction {self.direction!r}")
        if not self.tolerance >= 0:
            raise DomainError("tolerance must be nonnegative")

    @property
    def ratio(self) -> float:
        if self.right == 0:
            return math.inf if self.left > 0 else 1.0
        return self.left / self.right

    @property
    def passed(self) -> bool:
        r = self.ratio
        if not math.isfinite(r):
            return False
        if self.direction == "le":
            return r <= 1 + self.tolerance
        if self.direction == "lt":
            return r < 1 - self.tolerance
        return abs(r - 1) <= self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ratio"] = self.ratio
        d["verdict"] = self.verdict
        return d

    def line(self) -> str:
        op = {"le": "<=", "lt": "<", "approx": "~"}[self.direction]
        return (f"{self.verdict.upper():4s} {self.id}: {self.left:.10g} {op} {self.right:.10g}"
                f" (ratio {self.ratio:.10g})")


def mesh_polytope(P: Polytope, h: float | None = None) -> TriangleMesh:
    """Mesh a convex polygon; ``h`` defaults to 5% of the diameter."""
    if P.dimension != 2:
        raise DomainError("FEM audits need a planar body")
    if h is None:
        h = 0.05 * P.diameter
    return mesh_polygon(P.ordered_vertices(), h)


def _fem(P, e, h):
    mesh = mesh_polytope(P, h)
    res = minimize_lambda(mesh, e)
    return res, mesh


def verify_makai(P: Polytope, e, h: float | None = None, tolerance: float = 1e-9) -> InequalityReport:
    """Exact Makai lower bound against the P1 upper bound of lambda_{p,q}(P)."""
    e = as_pair(e)
    left = makai_lower_bound(P, e)
    res, mesh = _fem(P, e, h)
    how = "(pi_p/2)^p / r^p" if e.uses_inradius else "C_pq / (int d^a)^((p-q)/q), exact moment"
    return InequalityReport(
        f"makai[{e.p:g},{e.q:g}]", left, res.value, "le", tolerance, how,
        f"P1 {res.method}, {mesh.n_triangles} triangles",
        {"converged": res.converged, "iterations": res.iterations})


def verify_hersch_protter(P: Polytope, e, h: float | None = None,
                          tolerance: float = 1e-9) -> InequalityReport:
    e = as_pair(e)
    left = hersch_protter_bound(P, e)
    res, mesh = _fem(P, e, h)
    return InequalityReport(
        f"hersch_protter[{e.p:g},{e.q:g}]", left, res.value, "le", tolerance,
        "(pi_pq/2)^p / (|P|^((p-q)/q) r^p)", f"P1 {res.method}, {mesh.n_triangles} triangles",
        {"converged": res.converged})


def verify_moment_bound(P: Polytope, alpha: float, tolerance: float = 1e-9) -> InequalityReport:
    return InequalityReport(
        f"moment_bound[{alpha:g}]", distance_moment(P, alpha).value, moment_upper_bound(P, alpha),
        "le", tolerance, "exact moment over the facet partition", "|P| r^alpha / (alpha + 1)")


@dataclass
class SharpnessRow:
    L: float
    lam: float
    ratio: float
    oracle: float | None = None


@dataclass
class SharpnessTable:
    pair: tuple
    h: float
    rows: list

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.rows])

    @property
    def at_least_one(self) -> bool:
        return bool(np.all(self.ratios >= 1 - 1e-9))

    @property
    def decreasing(self) -> bool:
        return bool(np.all(np.diff(self.ratios) < 0))

    def to_csv(self) -> str:
        lines = ["L,lambda_upper,ratio,oracle"]
        for r in self.rows:
            o = "" if r.oracle is None else f"{r.oracle:.12g}"
            lines.append(f"{r.L:g},{r.lam:.12g},{r.ratio:.12g},{o}")
        return "\n".join(lines) + "\n"


def slab_sharpness(e, Ls=(1, 2, 4, 8), h: float = 0.02) -> SharpnessTable:
    """Ratio of the P1 upper bound to the Makai bound on rectangles L x 1.

    For (2, 2) the ratio is lambda r^2 / (pi/2)^2 and the rectangle oracle
    1 + 1/L^2 is attached to every row.
    """
    e = as_pair(e)
    rows = []
    for L in Ls:
        if L < 1:
            raise DomainError("slab lengths must be at least 1")
        P = slab(float(L))
        lam = minimize_lambda(mesh_polytope(P, h), e).value
        if e.uses_inradius:
            r, _ = inradius(P)
            ratio = lam * r**e.p / hp_constant(e.p)
        else:
            m = distance_moment(P, e.moment_exponent).value
            ratio = lam * m ** ((e.p - e.q) / e.q) / c_pq(e)
        oracle = 1 + 1 / L**2 if (e.p, e.q) == (2.0, 2.0) else None
        rows.append(SharpnessRow(float(L), lam, ratio, oracle))
    return SharpnessTable((e.p, e.q), h, rows)


def counterexample_annulus_tooth(eps: float = 0.1, h: float = 0.02) -> InequalityReport:
    """lambda_2 r^2 against pi^2 / 4 on the slit annulus with a tooth (r = 1/2).

    The right side of the certified chain is min(P1 value, enriched Ritz
    value); the inequality is strict, so the verdict requires ratio < 1.
    """
    if not 0 < eps < 1:
        raise DomainError("tooth half-width must lie in (0, 1)")
    s = tooth_study(eps, h)
    r = 0.5
    return InequalityReport(
        f"annulus_tooth[eps={eps:g}]", s.value * r**2, math.pi**2 / 4, "lt", 0.0,
        "upper bound of lambda_2 times r^2, r = 1/2",
        "(pi_2/2)^2 = pi^2/4",
        {"fem_value": s.fem_value, "ritz_value": s.ritz_value,
         "lambda_upper": s.value, "gap_to_pi2": math.pi**2 - s.value,
         "triangles": s.n_triangles, "seam_pairs": s.n_seam_pairs})


def slit_annulus_control(h: float = 0.01, tolerance: float = 0.05) -> InequalityReport:
    """P1 value on the slit annulus (no tooth) against its exact eigenvalue pi^2."""
    from .annulus import mesh_tooth

    mesh = mesh_tooth(0.0, h)
    res = minimize_lambda(mesh, (2, 2))
    return InequalityReport(
        "slit_annulus_control", res.value, math.pi**2, "approx", tolerance,
        f"P1 inverse iteration, {mesh.n_triangles} triangles", "exact lambda_2 = pi^2",
        {"seam_pairs": len(mesh.seams)})
