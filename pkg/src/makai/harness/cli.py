"""Command-line entry point: ``makai <subcommand> [options]``.

Every subcommand builds scenarios and goes through :func:`run`, so the
outputs (``report.json``, ``summary.csv`` and per-table CSV files under
``--out``) have the same shape.  The exit status is 1 when any verdict
fails and 2 for usage or scenario-file errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from .runner import constants_table, run
from .scenario import ScenarioError, bundled_suite, load_scenarios, parse_scenarios


def _value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ScenarioError(f"--param expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = _value(v)
    return out


def _pair(text: str):
    try:
        p, q = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected P,Q, got {text!r}") from None
    return [p, q]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", type=Path, help="scenario JSON file")
    common.add_argument("--out", type=Path, help="directory for report.json and CSV files")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--seed", type=int, help="base seed for random generators")
    common.add_argument("--tol", type=float, help="override the default check tolerance")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="makai", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", parents=[common], help="table of pi_pq and C_pq")
    c.add_argument("--p", type=float, nargs="+", default=[1.5, 2, 3, 4])
    c.add_argument("--q", type=float, nargs="+", default=[1, 1.5, 2])
    c.add_argument("--no-numeric", action="store_true", help="skip the 1D solver cross-check")

    v = sub.add_parser("verify", parents=[common], help="Makai / Hersch-Protter / moment checks")
    v.add_argument("--domain", default="regular_ngon", help="generator name")
    v.add_argument("--param", action="append", metavar="KEY=VALUE", help="generator parameter")
    v.add_argument("--pair", type=_pair, action="append", metavar="P,Q")
    v.add_argument("--check", action="append", choices=["makai", "hersch_protter", "moment_bound"])
    v.add_argument("--h", type=float, help="mesh size (default 5%% of the diameter)")

    s = sub.add_parser("sharpness", parents=[common], help="slab sharpness table")
    s.add_argument("--pair", type=_pair, action="append", metavar="P,Q")
    s.add_argument("--L", type=float, nargs="+", default=[1, 2, 4, 8])
    s.add_argument("--h", type=float, default=0.02)

    x = sub.add_parser("counterexample", parents=[common], help="slit annulus with a tooth")
    x.add_argument("--eps", type=float, default=0.1)
    x.add_argument("--h", type=float, default=0.02)
    x.add_argument("--control-h", type=float, help="also run the toothless control at this h")

    o = sub.add_parser("cov", parents=[common], help="normal-coordinate checks on smooth bodies")
    o.add_argument("--body", default="ellipse", choices=["ellipse", "circle", "tabulated"])
    o.add_argument("--param", action="append", metavar="KEY=VALUE")
    o.add_argument("--n", type=int, default=512)
    o.add_argument("--p", type=float, nargs="*", default=[2.0], help="exponents for weighted quotients")

    sub.add_parser("suite", parents=[common], help="run a scenario file (default: bundled suite)")
    return ap


def _scenarios_for(args):
    if args.scenario is not None:
        return load_scenarios(args.scenario, seed=args.seed, tol=args.tol)
    cmd = args.command
    if cmd == "suite":
        return load_scenarios(bundled_suite(), seed=args.seed, tol=args.tol)
    if cmd == "verify":
        raw = {"id": f"verify-{args.domain}", "checks": args.check or ["makai"],
               "domain": {"generator": args.domain, "params": _params(args.param)},
               "pairs": args.pair or [[2, 1], [2, 2]], "h": args.h}
        if args.domain == "regular_ngon" and not args.param:
            raw["domain"]["params"] = {"n": 6}
    elif cmd == "sharpness":
        raw = {"id": "sharpness", "checks": ["slab_sharpness"], "pairs": args.pair or [[2, 1], [2, 2]],
               "h": args.h, "params": {"Ls": args.L}}
    elif cmd == "counterexample":
        params = {"eps": args.eps}
        if args.control_h:
            params["control_h"] = args.control_h
        raw = {"id": "counterexample", "checks": ["counterexample"], "h": args.h, "params": params}
    elif cmd == "cov":
        params = {"n": args.n, "p": args.p}
        body = _params(args.param)
        if args.body == "ellipse":
            a, b = float(body.get("a", 2.0)), float(body.get("b", 1.0))
            params["cut_checks"] = [[0.0, b * b / a], [math.pi / 2, b]] if a >= b else []
        raw = {"id": f"cov-{args.body}", "checks": ["cov", "weighted_quotient"],
               "domain": {"generator": args.body, "params": body}, "params": params}
    else:  # pragma: no cover - argparse guards the choices
        raise ScenarioError(f"unknown command {cmd}")
    if args.tol is not None:
        raw["tolerance"] = args.tol
    return parse_scenarios({"schema_version": 1, "scenarios": [raw]}, seed=args.seed, tol=args.tol)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    if args.command == "constants":
        text = constants_table(args.p, args.q, numeric=not args.no_numeric)
        sys.stdout.write(text)
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / "constants.csv").write_text(text)
        return 0
    try:
        scenarios = _scenarios_for(args)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run(scenarios, jobs=args.jobs)
    for s in report.scenarios:
        for r in s["reports"]:
            op = {"le": "<=", "lt": "<", "approx": "~"}[r["direction"]]
            left = "nan" if r["left"] is None else f"{r['left']:.10g}"
            right = "nan" if r["right"] is None else f"{r['right']:.10g}"
            note = f"  [{r['extra']['error']}]" if "error" in r["extra"] else ""
            print(f"{r['verdict'].upper():4s} {s['id']} {r['id']}: {left} {op} {right}{note}")
        for tag, table in s["tables"].items():
            print(f"# {s['id']} {tag}\n{table}", end="")
    print(f"overall: {report.verdict.upper()} ({len(report.scenarios)} scenarios)")
    if args.out:
        report.write(args.out)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
