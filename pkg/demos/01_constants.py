#!/usr/bin/env python3
"""
Sharp one-dimensional constants
===============================

The Makai constant C_{p,q} is built from pi_{p,q}, the best constant of the
one-dimensional Poincare-Sobolev inequality on (0, 1).  This demo prints
the closed forms next to the piecewise-linear minimizer and looks at two
limits.

Usage:
  python demos/01_constants.py
"""
import math

from makai.constants import c_pq, hp_constant, pi_p, pi_pq, pi_pq_numeric

# ---------------------------------------------------------------------------
# Closed form against a direct minimization on a 2000-cell grid
# ---------------------------------------------------------------------------
print(f"{'p':>5} {'q':>5} {'pi_pq':>12} {'numeric':>12} {'rel diff':>10} {'C_pq':>12}")
for p, q in [(2, 1), (2, 2), (3, 2), (4, 4), (1.5, 1)]:
    exact = pi_pq((p, q))
    num = pi_pq_numeric((p, q), 2000)
    print(f"{p:5g} {q:5g} {exact:12.8f} {num:12.8f} {(num - exact) / exact:10.2e} {c_pq((p, q)):12.8f}")

# The numeric value is the exact quotient of a piecewise-linear function,
# so it always sits slightly above the closed form.

# ---------------------------------------------------------------------------
# Special values
# ---------------------------------------------------------------------------
print()
print(f"pi_2 = {pi_p(2):.15f} (pi = {math.pi:.15f})")
print(f"C_21 = {c_pq((2, 1)):.15f}")
print(f"C_22 = {c_pq((2, 2)):.15f} (pi^2/4 = {math.pi**2 / 4:.15f})")

# C_{p,1} is identically 1: the Beta-function factors cancel exactly.
print("C_p1 for p in 1.5, 2, 5, 80:", [round(c_pq((p, 1)), 14) for p in (1.5, 2, 5, 80)])

# For q = 2 the constant moves with p, and (pi_p/2)^p grows like p.
for p in (2, 4, 16, 64):
    print(f"p={p:3d}  C_p2 = {c_pq((p, 2)):10.5f}   (pi_p/2)^p = {hp_constant(p):10.5f}")
