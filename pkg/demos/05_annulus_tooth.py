#!/usr/bin/env python3
"""
Where convexity matters: a slit annulus with a tooth
====================================================

The annulus 1 < |x| < 2 cut along the positive x axis has lambda_2 = pi^2
and inradius 1/2, so lambda r^2 = pi^2/4 exactly.  Adding a small tooth
at (2, 0) lowers the eigenvalue, giving lambda r^2 < pi^2/4: the diagonal
bound fails for this simply connected, non-convex set.

The gain is tiny (about 1e-6 at eps = 0.1), far below the P1 error, so the
certificate uses the exact slit-annulus eigenfunction enriched with the
P1 hats near the tooth.

Usage:
  python demos/05_annulus_tooth.py
"""
import math

from makai.spectral import counterexample_annulus_tooth, tooth_study

print("eps      plain P1 - pi^2     enriched Ritz - pi^2")
for eps in (0.0, 0.05, 0.1, 0.2, 0.4):
    s = tooth_study(eps, h=0.04)
    print(f"{eps:4.2f}   {s.fem_value - math.pi**2:+.6e}     {s.ritz_value - math.pi**2:+.6e}")

rep = counterexample_annulus_tooth(0.1, 0.02)
print()
print(rep.line())
