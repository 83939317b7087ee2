#!/usr/bin/env python3
"""
Moments of the distance function
================================

On a convex polygon the distance to the boundary is the smallest facet
slack.  Splitting the body into nearest-facet cells turns int d^alpha into
a sum of exact simplex integrals.  We compare with Monte Carlo and with
the bound |P| r^alpha / (alpha + 1).

Usage:
  python demos/02_distance_moments.py
"""
import numpy as np

from makai.geometry import box, facet_partition, inradius, regular_polygon, slab
from makai.harness import random_convex
from makai.measure import distance_moment, monte_carlo_moment, moment_upper_bound, slab_moment_asymptote

sq = box([0, 0], [1, 1])
print("unit square: int d =", distance_moment(sq, 1).value, " int d^2 =", distance_moment(sq, 2).value)

# ---------------------------------------------------------------------------
# A random polygon: exact value, Monte Carlo, bound
# ---------------------------------------------------------------------------
P = random_convex(20, seed=3)
r, c = inradius(P)
print(f"\nrandom polygon: {len(P.vertices)} vertices, area {P.volume:.4f}, inradius {r:.4f}")
print(f"{len(facet_partition(P))} nearest-facet cells")
for mc in monte_carlo_moment(P, [0.5, 1, 2, 3.7], n=1_000_000, seed=1):
    exact = distance_moment(P, mc.alpha).value
    bound = moment_upper_bound(P, mc.alpha)
    z = (mc.value - exact) / mc.error
    print(f"alpha={mc.alpha:4.1f}  exact {exact:.6f}  MC {mc.value:.6f} (z={z:+.2f})  bound {bound:.6f}")

# ---------------------------------------------------------------------------
# Slabs: the bound becomes sharp as the slab gets long
# ---------------------------------------------------------------------------
print("\nslab (-L/2, L/2) x (0, 1), alpha = 2")
for L in (1, 2, 4, 8, 16):
    m = distance_moment(slab(L), 2).value
    print(f"L={L:3d}  moment/leading term {m / slab_moment_asymptote(L, 2):.5f}"
          f"   bound/moment {moment_upper_bound(slab(L), 2) / m:.5f}")

# The same machinery works in three dimensions.
print("\nbox 1x2x3: int d =", distance_moment(box([0, 0, 0], [1, 2, 3]), 1).value)
print("hexagon, alpha=2.5:", distance_moment(regular_polygon(6), 2.5).value)
