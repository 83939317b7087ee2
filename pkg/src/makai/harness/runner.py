"""Execute scenarios and assemble machine-readable reports."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import platform
import socket
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import scipy

from ..constants import as_pair, c_pq, pi_pq, pi_pq_numeric
from ..errors import DomainError, MakaiError
from ..geometry import Polytope
from ..normal_coords import cov_integral, cut_distance, hp_smooth_check, weighted_quotient_check
from ..spectral.audit import (
    InequalityReport,
    counterexample_annulus_tooth,
    slab_sharpness,
    slit_annulus_control,
    verify_hersch_protter,
    verify_makai,
    verify_moment_bound,
)
from .scenario import SCHEMA_VERSION, Scenario, generate_domain, is_smooth

log = logging.getLogger(__name__)


def _need_polytope(domain, check):
    if not isinstance(domain, Polytope):
        raise DomainError(f"check {check!r} needs a polytope domain")
    return domain


def _need_smooth(domain, check):
    if not is_smooth(domain):
        raise DomainError(f"check {check!r} needs a smooth body")
    return domain


def _check_makai(s: Scenario, domain, tables):
    P = _need_polytope(domain, "makai")
    return [verify_makai(P, e, s.h, s.tol("default")) for e in s.pairs]


def _check_hersch_protter(s, domain, tables):
    if is_smooth(domain):
        out = []
        for p, q in s.pairs:
            if p != q:
                raise DomainError("smooth-body Hersch-Protter checks need q = p")
            out.append(hp_smooth_check(domain, p, int(s.params.get("n_poly", 128)), s.h))
        return out
    P = _need_polytope(domain, "hersch_protter")
    return [verify_hersch_protter(P, e, s.h, s.tol("default")) for e in s.pairs]


def _check_moment_bound(s, domain, tables):
    P = _need_polytope(domain, "moment_bound")
    return [verify_moment_bound(P, a, s.tol("default")) for a in s.params.get("alphas", [0.5, 1, 2])]


def _check_slab(s, domain, tables):
    Ls = s.params.get("Ls", [1, 2, 4, 8])
    h = s.h if s.h is not None else 0.02
    out = []
    for pq in s.pairs:
        e = as_pair(pq)
        tab = slab_sharpness(e, Ls, h)
        tag = f"slab[{e.p:g},{e.q:g}]"
        tables[tag] = tab.to_csv()
        for row in tab.rows:
            out.append(InequalityReport(f"{tag} L={row.L:g} ratio>=1", 1.0, row.ratio, "le",
                                        s.tol("default"), "Makai bound (normalized)",
                                        "P1 upper bound / Makai bound"))
            if row.oracle is not None:
                out.append(InequalityReport(f"{tag} L={row.L:g} oracle", row.ratio, row.oracle,
                                            "approx", s.tol("slab_oracle"), "P1 ratio",
                                            "1 + 1/L^2 (rectangle eigenvalues)"))
        for a, b in zip(tab.rows, tab.rows[1:]):
            out.append(InequalityReport(f"{tag} L={a.L:g}->{b.L:g} decreasing", b.ratio, a.ratio,
                                        "lt", 0.0, f"ratio at L={b.L:g}", f"ratio at L={a.L:g}"))
    return out


def _check_counterexample(s, domain, tables):
    eps = float(s.params.get("eps", getattr(domain, "eps", 0.1)))
    h = s.h if s.h is not None else 0.02
    out = [counterexample_annulus_tooth(eps, h)]
    if s.params.get("control_h"):
        out.append(slit_annulus_control(float(s.params["control_h"]), s.tol("control")))
    return out


def _check_cov(s, domain, tables):
    body = _need_smooth(domain, "cov")
    n = int(s.params.get("n", 512))
    value = cov_integral(body, lambda z: np.ones(len(z)), n, n)
    out = [InequalityReport(f"cov[{body.name},n={n}]", value, body.area(1 << 16), "approx",
                            s.tol("cov"), "normal-coordinate quadrature of 1",
                            "shoelace area of a 65536-gon")]
    for sv, expected in s.params.get("cut_checks", []):
        out.append(InequalityReport(f"cut_distance[{body.name},s={sv:g}]", cut_distance(body, sv),
                                    float(expected), "approx", s.tol("cut"), "bisection",
                                    "medial-axis value"))
    return out


def _check_weighted(s, domain, tables):
    body = _need_smooth(domain, "weighted_quotient")
    ps = s.params.get("p", sorted({pq[0] for pq in s.pairs}) or [2.0])
    n = int(s.params.get("n", 2000))
    return [weighted_quotient_check(body, float(sv), float(p), n, s.tol("weighted_quotient"))
            for sv in s.params.get("s", [0.0, math.pi / 2]) for p in ps]


CHECK_RUNNERS = {
    "makai": _check_makai,
    "hersch_protter": _check_hersch_protter,
    "moment_bound": _check_moment_bound,
    "slab_sharpness": _check_slab,
    "counterexample": _check_counterexample,
    "cov": _check_cov,
    "weighted_quotient": _check_weighted,
}


def _error_report(rid, exc):
    return InequalityReport(rid, math.nan, math.nan, "le", 1e-9, "", "",
                            {"error": f"{type(exc).__name__}: {exc}"})


def run_scenario(s: Scenario) -> dict:
    """Run every check of one scenario; failures become failed reports."""
    t0 = time.perf_counter()
    reports, tables = [], {}
    domain = None
    try:
        if s.domain is not None:
            domain = generate_domain(s.domain, seed=s.seed)
    except (MakaiError, ValueError, TypeError) as exc:
        reports.append(_error_report(f"{s.id}:domain", exc))
    else:
        for check in s.checks:
            try:
                reports += CHECK_RUNNERS[check](s, domain, tables)
            except Exception as exc:  # one bad check must not stop the run
                log.exception("scenario %s check %s failed", s.id, check)
                reports.append(_error_report(f"{check}:error", exc))
    dicts = [r.to_dict() for r in reports]
    return {
        "id": s.id,
        "verdict": "pass" if all(r.passed for r in reports) else "fail",
        "reports": dicts,
        "tables": tables,
        "seconds": time.perf_counter() - t0,
    }


def _clean(x):
    if isinstance(x, float):
        return x if math.isfinite(x) else None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.generic):
        return _clean(x.item())
    return x


@dataclass
class RunReport:
    scenarios: list
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(s["verdict"] == "pass" for s in self.scenarios)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return _clean({"schema_version": SCHEMA_VERSION, "verdict": self.verdict,
                       "scenarios": self.scenarios, "metadata": self.metadata})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "check", "left", "right", "ratio", "direction", "tolerance", "verdict"])
        for s in self.scenarios:
            for r in s["reports"]:
                w.writerow([s["id"], r["id"], _fmt(r["left"]), _fmt(r["right"]), _fmt(r["ratio"]),
                            r["direction"], _fmt(r["tolerance"]), r["verdict"]])
        return buf.getvalue()

    def write(self, out_dir) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(self.to_json() + "\n")
        (out / "summary.csv").write_text(self.summary_csv())
        for s in self.scenarios:
            for tag, text in s.get("tables", {}).items():
                name = "".join(c if c.isalnum() else "_" for c in f"{s['id']}_{tag}").strip("_")
                (out / f"{name}.csv").write_text(text)
        return out


def _fmt(x):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return ""
    return f"{x:.12g}"


def run(scenarios: list[Scenario], jobs: int = 1) -> RunReport:
    """Run scenarios serially or on ``jobs`` worker processes.

    Results keep the input order and carry no timing data outside the
    metadata block, so serial and parallel runs give identical reports
    apart from ``metadata``.
    """
    started = datetime.now(timezone.utc).isoformat()
    t0 = time.perf_counter()
    if jobs > 1 and len(scenarios) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_scenario, scenarios))
    else:
        results = [run_scenario(s) for s in scenarios]
    timing = {r["id"]: r.pop("seconds") for r in results}
    meta = {
        "started": started,
        "host": socket.gethostname(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "jobs": jobs,
        "wall_clock_seconds": timing,
        "total_seconds": time.perf_counter() - t0,
    }
    return RunReport(results, meta)


# ---------------------------------------------------------------------------
# constants table


def constants_table(ps, qs, numeric: bool = True, n: int = 2000) -> str:
    """CSV of pi_{p,q}, C_{p,q} and the 1D solver cross-check."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "q", "pi_pq", "C_pq", "pi_pq_numeric", "rel_delta", "note"])
    for p in ps:
        for q in qs:
            try:
                e = as_pair((p, q))
            except DomainError as exc:
                w.writerow([f"{p:g}", f"{q:g}", "", "", "", "", f"skipped: {exc}"])
                continue
            exact = pi_pq(e)
            row = [f"{p:g}", f"{q:g}", f"{exact:.15g}", f"{c_pq(e):.15g}"]
            if numeric:
                num = pi_pq_numeric(e, n)
                row += [f"{num:.15g}", f"{(num - exact) / exact:.3e}", ""]
            else:
                row += ["", "", ""]
            w.writerow(row)
    return buf.getvalue()
