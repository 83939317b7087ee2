#!/usr/bin/env python3
"""
Certifying the Makai lower bound
================================

Every P1 finite element field that vanishes on the boundary is an
admissible test function, and its Rayleigh quotient is evaluated exactly.
So the FEM value is an upper bound for lambda_{p,q}, and an exact lower
bound below it is a certified (one-sided) check.

Usage:
  python demos/03_makai_audit.py [n_polygons]
"""
import sys
import time

from makai.harness import random_convex
from makai.spectral import verify_makai

n = int(sys.argv[1]) if len(sys.argv) > 1 else 10
pairs = [(2, 1), (3, 2), (2, 2)]
t0 = time.perf_counter()
worst = {e: 0.0 for e in pairs}
for seed in range(n):
    P = random_convex(20, seed)
    for e in pairs:
        rep = verify_makai(P, e, 0.05 * P.diameter)
        worst[e] = max(worst[e], rep.ratio)
        assert rep.passed, rep.line()
    print(rep.line())

print(f"\n{n} polygons in {time.perf_counter() - t0:.1f} s")
for e, w in worst.items():
    print(f"(p, q) = {e}: largest lower/upper ratio {w:.4f}")
