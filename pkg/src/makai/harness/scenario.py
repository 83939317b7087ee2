"""Scenario files: parsing, validation and domain generators."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import geometry
from ..errors import DomainError, MakaiError
from ..normal_coords import SmoothBody2D, circle, ellipse, tabulated_body
from ..spectral.annulus import tooth_geometry

SCHEMA_VERSION = 1
CHECKS = ("makai", "hersch_protter", "moment_bound", "slab_sharpness",
          "counterexample", "cov", "weighted_quotient")
DEFAULT_TOLERANCES = {
    "default": 1e-9,        # slack on certified one-sided checks
    "slab_oracle": 0.02,    # relative, rectangle eigenvalue oracle
    "cov": 1e-3,            # relative, change-of-variables area
    "control": 0.05,        # relative, slit annulus against pi^2
    "weighted_quotient": 1e-3,
    "cut": 1e-4,            # relative, cut distance against a known value
}


class ScenarioError(MakaiError, ValueError):
    """Malformed scenario file or field."""


# ---------------------------------------------------------------------------
# generators


def random_convex(k: int, seed: int, min_vertices: int = 5) -> geometry.Polytope:
    """Convex hull of ``k`` uniform points in the unit disk (redrawn below 5 vertices)."""
    if k < min_vertices:
        raise DomainError(f"need at least {min_vertices} points")
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        r = np.sqrt(rng.random(k))
        t = 2 * np.pi * rng.random(k)
        pts = np.column_stack([r * np.cos(t), r * np.sin(t)])
        P = geometry.from_vertices(pts)
        if len(P.vertices) >= min_vertices:
            return P
    raise DomainError("could not draw a hull with enough vertices")


def _simplex3d(vertices=None):
    if vertices is None:
        vertices = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
    return geometry.simplex_polytope(vertices)


GENERATORS = {
    "regular_ngon": lambda n, r=1.0, phase=0.0: geometry.regular_polygon(int(n), float(r), float(phase)),
    "random_convex": lambda k, seed=0: random_convex(int(k), int(seed)),
    "rectangle": lambda L=1.0: geometry.slab(float(L)),
    "triangle": lambda vertices: geometry.from_vertices(vertices),
    "box3d": lambda a=1.0, b=1.0, c=1.0: geometry.box([0, 0, 0], [a, b, c]),
    "simplex3d": _simplex3d,
    "annulus_tooth": lambda eps=0.1, h=0.02: tooth_geometry(float(eps), float(h)),
    "ellipse": lambda a=2.0, b=1.0: ellipse(float(a), float(b)),
    "circle": lambda R=1.0: circle(float(R)),
    "tabulated": lambda points, name="tabulated": tabulated_body(points, name),
}


def generate_domain(spec: dict, seed: int | None = None):
    """Build a Polytope, SmoothBody2D or tooth geometry from a domain spec.

    ``{"generator": name, "params": {...}}`` or ``{"polytope": {...}}``
    (the JSON form of :class:`makai.geometry.Polytope`).  ``seed`` fills in
    a missing ``seed`` parameter of random generators.
    """
    if not isinstance(spec, dict):
        raise ScenarioError("domain must be an object")
    if "polytope" in spec:
        return geometry.polytope_from_dict(spec["polytope"])
    name = spec.get("generator")
    if name not in GENERATORS:
        raise ScenarioError(f"unknown generator {name!r}")
    params = dict(spec.get("params", {}))
    if name == "random_convex" and "seed" not in params and seed is not None:
        params["seed"] = seed
    try:
        return GENERATORS[name](**params)
    except TypeError as exc:
        raise ScenarioError(f"bad parameters for {name}: {exc}") from exc


# ---------------------------------------------------------------------------
# scenarios


@dataclass
class Scenario:
    id: str
    checks: list
    domain: dict | None = None
    pairs: list = field(default_factory=list)
    h: float | None = None
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0
    params: dict = field(default_factory=dict)

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, self.tolerances["default"]))

    def to_dict(self) -> dict:
        return {"id": self.id, "checks": list(self.checks), "domain": self.domain,
                "pairs": [list(p) for p in self.pairs], "h": self.h,
                "tolerances": dict(self.tolerances), "seed": self.seed, "params": dict(self.params)}


def _field(ctx, cond, msg):
    if not cond:
        raise ScenarioError(f"{ctx}: {msg}")


def _parse_one(raw: dict, ctx: str, base_seed: int, tol_override: float | None) -> list[Scenario]:
    _field(ctx, isinstance(raw, dict), "scenario must be an object")
    sid = raw.get("id")
    _field(f"{ctx}.id", isinstance(sid, str) and sid, "non-empty string required")
    checks = raw.get("checks", [])
    _field(f"{ctx}.checks", isinstance(checks, list) and checks, "non-empty list required")
    for c in checks:
        _field(f"{ctx}.checks", c in CHECKS, f"unknown check {c!r}")
    pairs = raw.get("pairs", [])
    _field(f"{ctx}.pairs", isinstance(pairs, list), "list of [p, q] required")
    for k, pq in enumerate(pairs):
        _field(f"{ctx}.pairs[{k}]", isinstance(pq, (list, tuple)) and len(pq) == 2, "[p, q] required")
    h = raw.get("h")
    _field(f"{ctx}.h", h is None or (isinstance(h, (int, float)) and h > 0), "positive number or null")
    tols = dict(DEFAULT_TOLERANCES)
    if "tolerance" in raw:
        tols["default"] = raw["tolerance"]
    tols.update(raw.get("tolerances", {}))
    if tol_override is not None:
        tols["default"] = tol_override
    for key, v in tols.items():
        _field(f"{ctx}.tolerances.{key}", isinstance(v, (int, float)) and v > 0 and math.isfinite(v),
               "tolerances must be positive")
    domain = raw.get("domain")
    if domain is not None:
        _field(f"{ctx}.domain", isinstance(domain, dict), "object required")
        gen = domain.get("generator")
        _field(f"{ctx}.domain.generator", "polytope" in domain or gen in GENERATORS,
               f"unknown generator {gen!r}")
    seed = int(raw.get("seed", base_seed))
    repeat = int(raw.get("repeat", 1))
    _field(f"{ctx}.repeat", repeat >= 1, "must be at least 1")
    params = raw.get("params", {})
    _field(f"{ctx}.params", isinstance(params, dict), "object required")
    out = []
    for k in range(repeat):
        out.append(Scenario(sid if repeat == 1 else f"{sid}#{k}", list(checks), domain,
                            [list(map(float, pq)) for pq in pairs], h, dict(tols), seed + k,
                            dict(params)))
    return out


def parse_scenarios(data, *, seed: int | None = None, tol: float | None = None) -> list[Scenario]:
    """Validate a decoded scenario document and expand ``repeat`` entries."""
    if isinstance(data, list):
        data = {"scenarios": data}
    if not isinstance(data, dict):
        raise ScenarioError("top level must be an object or a list of scenarios")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"schema_version: unsupported value {version!r}")
    base_seed = int(seed if seed is not None else data.get("seed", 0))
    raw = data.get("scenarios", [])
    if not isinstance(raw, list):
        raise ScenarioError("scenarios: list required")
    out = []
    for i, item in enumerate(raw):
        out += _parse_one(item, f"scenarios[{i}]", base_seed, tol)
    ids = [s.id for s in out]
    dup = {i for i in ids if ids.count(i) > 1}
    if dup:
        raise ScenarioError(f"duplicate scenario ids: {sorted(dup)}")
    return out


def load_scenarios(path, *, seed: int | None = None, tol: float | None = None) -> list[Scenario]:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return parse_scenarios(data, seed=seed, tol=tol)


def bundled_suite() -> Path:
    return Path(__file__).with_name("data") / "default_suite.json"


def is_smooth(domain) -> bool:
    return isinstance(domain, SmoothBody2D)
