"""Acceptance suite: one test and one printed verdict line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the verdict lines are
repeated in the terminal summary) or ``python tests/test_acceptance.py``.
"""
import math
import time

import numpy as np
import pytest

from acceptance_log import record
from makai.constants import Weight1D, c_pq, hp_constant, mu_p_numeric, pi_p, pi_pq, pi_pq_numeric
from makai.geometry import box, inradius, regular_polygon, simplex_polytope, slab
from makai.harness.scenario import random_convex
from makai.measure import (
    distance_moment,
    makai_lower_bound,
    monte_carlo_moment,
    moment_upper_bound,
    slab_moment_asymptote,
)
from makai.normal_coords import circle, cov_integral, cut_distance, ellipse, hp_smooth_check
from makai.spectral.audit import (
    counterexample_annulus_tooth,
    mesh_polytope,
    slab_sharpness,
    slit_annulus_control,
    verify_makai,
)
from makai.spectral.fem import minimize_lambda
from makai.spectral.mesh import mesh_polygon
from oracles import disk_eigenvalue, pi_pq_reference, square_torsion

pytestmark = pytest.mark.acceptance


def test_criterion_01_constants():
    t = time.perf_counter()
    d21 = abs(c_pq((2, 1)) - 1)
    d22 = abs(c_pq((2, 2)) - math.pi**2 / 4)
    ok = d21 <= 1e-10 and d22 <= 1e-10
    assert record(1, ok, f"|C21-1|={d21:.1e}, |C22-pi^2/4|={d22:.1e} (tol 1e-10)",
                  time.perf_counter() - t, 1)


def test_criterion_02_pi_pq_numeric():
    t = time.perf_counter()
    worst = 0.0
    for pq in [(2, 1), (2, 2), (3, 2), (4, 4), (1.5, 1)]:
        exact = pi_pq(pq)
        assert exact == pytest.approx(pi_pq_reference(*pq), rel=1e-8)
        worst = max(worst, abs(pi_pq_numeric(pq, 2000) - exact) / exact)
    assert record(2, worst <= 0.01, f"max rel delta {worst:.2e} (tol 1e-2)", time.perf_counter() - t, 30)


def test_criterion_03_mu_constant_weight():
    t = time.perf_counter()
    worst = 0.0
    for L in (1.0, 2.0):
        for p in (1.5, 2.0, 3.0):
            ref = L**-p * (pi_p(p) / 2) ** p
            worst = max(worst, abs(mu_p_numeric(Weight1D.constant(L), p, 2000) - ref) / ref)
    assert record(3, worst <= 0.005, f"max rel delta {worst:.2e} (tol 5e-3)", time.perf_counter() - t, 30)


def test_criterion_04_monotone_weights():
    t = time.perf_counter()
    rng = np.random.default_rng(2024)
    weights = []
    for _ in range(50):
        k = int(rng.integers(1, 6))
        breaks = np.sort(rng.uniform(0.05, 0.95, k))
        levels = np.sort(rng.uniform(0.05, 1.0, k + 1))[::-1]
        weights.append(Weight1D.steps(1.0, breaks, levels))
    violations, worst = 0, math.inf
    for p in (1.5, 2.0, 3.0):
        mu1 = mu_p_numeric(Weight1D.constant(1.0), p, 2000)
        for w in weights:
            assert w.monotone
            mu = mu_p_numeric(w, p, 2000, restarts=1)
            margin = (mu - mu1) / mu1
            worst = min(worst, margin)
            violations += mu < mu1 - 1e-3 * mu1
    assert record(4, violations == 0,
                  f"{violations} violations in 150 cases, min (mu_w - mu_1)/mu_1 = {worst:.3e}",
                  time.perf_counter() - t, 120)


def test_criterion_05_moments():
    t = time.perf_counter()
    sq = box([0, 0], [1, 1])
    e1 = abs(distance_moment(sq, 1).value - 1 / 6)
    e2 = abs(distance_moment(sq, 2).value - 1 / 24)
    alphas = [0.5, 1.0, 2.0, 3.7]
    zmax, misses = 0.0, 0
    for seed in range(50):
        P = random_convex(20, seed)
        mcs = monte_carlo_moment(P, alphas, n=1_000_000, seed=seed)
        for a, mc in zip(alphas, mcs):
            z = abs(distance_moment(P, a).value - mc.value) / mc.error
            zmax = max(zmax, z)
            misses += z > 3
    ok = e1 <= 1e-9 and e2 <= 1e-9 and misses == 0
    assert record(5, ok, f"square errors {e1:.1e}, {e2:.1e}; MC |z| max {zmax:.2f}, "
                         f"{misses}/200 beyond 3 sigma", time.perf_counter() - t, 120)


def test_criterion_06_moment_upper_bound():
    t = time.perf_counter()
    bodies = [random_convex(20, s) for s in range(50)]
    bodies += [regular_polygon(n) for n in (3, 4, 6, 64)] + [slab(L) for L in (1, 2, 4, 8)]
    bodies += [box([0, 0, 0], [1, 2, 3]), box([0, 0, 0], [1, 1, 1]),
               simplex_polytope([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]),
               simplex_polytope([[0, 0, 0], [2, 0, 0], [0, 1, 0], [0.3, 0.4, 1.5]])]
    worst = 0.0
    for P in bodies:
        for a in (0.5, 1.0, 2.0):
            worst = max(worst, distance_moment(P, a).value / moment_upper_bound(P, a))
    trend_ok = True
    trends = []
    for a in (0.5, 1.0, 2.0):
        r = [distance_moment(slab(L), a).value / slab_moment_asymptote(L, a) for L in (2, 4, 8)]
        trends.append(r)
        trend_ok &= all(x < y < 1 for x, y in zip(r, r[1:]))
    ok = worst <= 1 and trend_ok
    assert record(6, ok, f"max moment/bound {worst:.4f} over {len(bodies)} bodies; "
                         f"slab ratios (alpha=2) {', '.join(f'{x:.4f}' for x in trends[-1])} increasing to 1",
                  time.perf_counter() - t, 60)


def test_criterion_07_makai_audit():
    t = time.perf_counter()
    violations, worst = 0, 0.0
    for seed in range(100):
        P = random_convex(20, seed)
        mesh = mesh_polytope(P, 0.05 * P.diameter)
        for e in [(2, 1), (3, 2), (2, 2)]:
            left = makai_lower_bound(P, e)
            right = minimize_lambda(mesh, e).value
            worst = max(worst, left / right)
            violations += left > right
    assert record(7, violations == 0, f"{violations} violations in 300 cases, max ratio {worst:.4f}",
                  time.perf_counter() - t, 900)


def test_criterion_08_torsion():
    t = time.perf_counter()
    T_ref = square_torsion()
    m = mesh_polygon([[0, 0], [1, 0], [1, 1], [0, 1]], 0.1)
    vals = [minimize_lambda(m, (2, 1)).value]
    for _ in range(2):
        m = m.refine()
        vals.append(minimize_lambda(m, (2, 1)).value)
    rel = abs(vals[-1] * T_ref - 1)
    ok = rel <= 0.01 and vals[0] >= vals[1] >= vals[2] and 1 / vals[-1] <= 1 / 24
    assert record(8, ok, f"lambda_21 {vals[0]:.4f} -> {vals[1]:.4f} -> {vals[2]:.4f}, "
                         f"oracle {1 / T_ref:.4f} (rel {rel:.2e}); 1/lambda={1 / vals[-1]:.6f} <= 1/24",
                  time.perf_counter() - t, 120)


def test_criterion_09_slab_sharpness():
    t = time.perf_counter()
    diag = slab_sharpness((2, 2), (1, 2, 4), 0.02)
    dev = max(abs(r.ratio / r.oracle - 1) for r in diag.rows)
    torsion = slab_sharpness((2, 1), (1, 2, 4, 8), 0.02)
    ok = dev <= 0.02 and torsion.decreasing and torsion.at_least_one
    assert record(9, ok, f"(2,2) ratios {', '.join(f'{r.ratio:.4f}' for r in diag.rows)} "
                         f"(max dev {dev:.2e}); (2,1) ratios "
                         f"{', '.join(f'{x:.4f}' for x in torsion.ratios)} strictly decreasing",
                  time.perf_counter() - t, 600)


def test_criterion_10_counterexample():
    t = time.perf_counter()
    rep = counterexample_annulus_tooth(0.1, 0.02)
    ctl = slit_annulus_control(0.01)
    lam = rep.extra["lambda_upper"]
    ok = rep.passed and lam < math.pi**2 and ctl.passed
    assert record(10, ok, f"tooth lambda_upper = pi^2 - {math.pi**2 - lam:.3e} "
                          f"(P1 alone {rep.extra['fem_value']:.5f}); lambda r^2 = {rep.left:.9f} < "
                          f"{rep.right:.9f}; control {ctl.left:.5f} (rel {ctl.ratio - 1:+.2e}, tol 5e-2)",
                  time.perf_counter() - t, 600)


def test_criterion_11_change_of_variables():
    t = time.perf_counter()
    one = lambda z: np.ones(len(z))
    ec = abs(cov_integral(circle(1.0), one, 512, 512) - math.pi)
    ee = abs(cov_integral(ellipse(2.0, 1.0), one, 512, 512) - 2 * math.pi)
    E = ellipse(2.0, 1.0)
    c0 = abs(cut_distance(E, 0.0) - 0.5)
    c1 = abs(cut_distance(E, math.pi / 2) - 1.0)
    ok = ec <= 1e-3 and ee <= 1e-3 and c0 <= 1e-4 and c1 <= 1e-4
    assert record(11, ok, f"area errors circle {ec:.1e}, ellipse {ee:.1e}; cut distance errors "
                          f"{c0:.1e}, {c1:.1e}", time.perf_counter() - t, 60)


def test_criterion_12_hersch_protter():
    t = time.perf_counter()
    bodies = {"square": box([0, 0], [1, 1]), "hexagon": regular_polygon(6), "64-gon": regular_polygon(64)}
    worst, fails = 0.0, 0
    for name, P in bodies.items():
        r, _ = inradius(P)
        mesh = mesh_polytope(P, 0.05 * P.diameter)
        for p in (1.5, 2.0, 3.0):
            left = hp_constant(p) / r**p
            right = minimize_lambda(mesh, (p, p)).value
            worst = max(worst, left / right)
            fails += left > right
    disk = hp_smooth_check(circle(1.0), 2.0, 128, 0.05)
    bessel = disk_eigenvalue()
    ok = fails == 0 and disk.passed and abs(disk.right / bessel - 1) < 0.01
    assert record(12, ok, f"{fails} violations in 9 cases (max ratio {worst:.4f}); disk p=2: "
                          f"{disk.left:.4f} <= {disk.right:.4f} (Bessel {bessel:.4f})",
                  time.perf_counter() - t, 300)


def test_criterion_13_limits():
    t = time.perf_counter()
    d = max(abs(c_pq((2 + s, 1)) - 1) for s in (-1e-4, 1e-4))
    big = c_pq((80, 1)) ** (1 / 80)
    ok = d <= 1e-3 and abs(big - 1) <= 0.05
    assert record(13, ok, f"|C(p,1)-1| at p=2+-1e-4: {d:.1e}; C(80,1)^(1/80) = {big:.6f}",
                  time.perf_counter() - t, 1)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v"]))
