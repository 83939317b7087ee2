#!/usr/bin/env python3
"""
Normal coordinates on smooth convex bodies
==========================================

Each interior point is x + t nu(x) for a boundary point x and a depth t
below the cut distance l(x).  The area element is (1 - t kappa) ds dt.
On the ellipse x^2/4 + y^2 = 1 the cut locus is the segment |x| <= 3/2 of
the major axis.

Usage:
  python demos/06_normal_coordinates.py
"""
import math

import numpy as np

from makai.normal_coords import circle, cov_integral, cut_distance, ellipse, hp_smooth_check, weighted_quotient_check

E = ellipse(2.0, 1.0)
for s in (0.0, math.pi / 6, math.pi / 3, math.pi / 2):
    print(f"s={s:.4f}  kappa={float(E.curvature(s)):.4f}  l(s)={cut_distance(E, s):.8f}")

one = lambda z: np.ones(len(z))
print(f"\nellipse area via normal coordinates: {cov_integral(E, one, 256, 256):.10f} (2 pi = {2 * math.pi:.10f})")
d2 = lambda z: (1 - np.hypot(*z.T)) ** 2
print(f"unit disk, int d^2: {cov_integral(circle(1.0), d2, 256, 256):.8f} (pi/6 = {math.pi / 6:.8f})")

# The weight 1 - t kappa is non-increasing, and such weights never beat the constant one.
print()
print(weighted_quotient_check(E, 0.0, 2.0, 1000).line())
print(weighted_quotient_check(circle(1.0), 0.0, 2.0, 1000).line())
print(hp_smooth_check(E, 2.0).line())
