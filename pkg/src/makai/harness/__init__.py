"""Scenario-driven audits and the command-line interface."""
from .runner import RunReport, constants_table, run, run_scenario
from .scenario import (
    GENERATORS,
    Scenario,
    ScenarioError,
    bundled_suite,
    generate_domain,
    load_scenarios,
    parse_scenarios,
    random_convex,
)

__all__ = [
    "GENERATORS", "RunReport", "Scenario", "ScenarioError", "bundled_suite", "constants_table",
    "generate_domain", "load_scenarios", "parse_scenarios", "random_convex", "run", "run_scenario",
]
