import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from makai.errors import DomainError
from makai.kernels import complete_homogeneous, linear_power_integrals, symmetric_power_integrals
from oracles import brute_simplex_power

TRI = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def test_complete_homogeneous_small_cases():
    h = complete_homogeneous([[1.0, 2.0, 3.0]], 2)[0]
    assert h[0] == 1 and h[1] == 6
    assert h[2] == pytest.approx(1 + 4 + 9 + 2 + 3 + 6)


def test_integer_route_matches_real_route():
    rng = np.random.default_rng(3)
    vals = rng.random((50, 3))
    vols = rng.random(50)
    for k in (0, 1, 2, 5):
        a = symmetric_power_integrals(vols, vals, k)
        b = linear_power_integrals(vols, vals, float(k))
        np.testing.assert_allclose(a, b, rtol=1e-11)


def test_constant_integrand():
    out = linear_power_integrals([0.5], [[2.0, 2.0, 2.0]], 1.7)
    assert out[0] == pytest.approx(0.5 * 2.0**1.7, rel=1e-13)


def test_vertex_concentrated_integrand():
    # l = x on the unit triangle: int x^a = 1 / ((a + 1)(a + 2))
    for a in (0.5, 1.3, 3.7):
        out = linear_power_integrals([0.5], [[0.0, 1.0, 0.0]], a)[0]
        assert out == pytest.approx(1 / ((a + 1) * (a + 2)), rel=1e-12)


def test_three_dimensional_against_sampling():
    V = np.array([[0, 0, 0], [1, 0, 0], [0, 2, 0], [0, 0, 1.5]], float)
    vals = np.array([0.1, 0.9, 0.4, 0.7])
    exact = linear_power_integrals([abs(np.linalg.det(V[1:] - V[0])) / 6], [vals], 2.3)[0]
    mc, se = brute_simplex_power(V, vals, 2.3)
    assert abs(exact - mc) < 4 * se


def test_near_confluent_values_are_stable():
    base = np.array([0.3, 0.3, 0.3])
    ref = 0.5 * 0.3**2.5
    for eps in (1e-3, 1e-6, 1e-9, 1e-12):
        out = linear_power_integrals([0.5], [base + [0, eps, 2 * eps]], 2.5)[0]
        assert out == pytest.approx(ref, rel=10 * eps + 1e-12)


def test_negative_values_rejected():
    with pytest.raises(DomainError):
        linear_power_integrals([1.0], [[-0.5, 1.0, 1.0]], 1.0)
    # round-off negatives are clipped when a tolerance is given
    out = linear_power_integrals([1.0], [[-1e-15, 1.0, 1.0]], 1.0, clip_tol=1e-9)
    assert out[0] == pytest.approx(2 / 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 5, allow_subnormal=False), min_size=3, max_size=3),
       st.floats(0.1, 6.0), st.floats(0.1, 10.0))
def test_homogeneity(values, alpha, c):
    v = np.array([values])
    a = linear_power_integrals([1.0], v * c, alpha)[0]
    b = c**alpha * linear_power_integrals([1.0], v, alpha)[0]
    assert a == pytest.approx(b, rel=1e-9, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 3), min_size=3, max_size=3), st.floats(0.2, 5.0))
def test_permutation_invariance(values, alpha):
    v = np.array(values)
    a = linear_power_integrals([1.0], [v], alpha)[0]
    b = linear_power_integrals([1.0], [v[::-1]], alpha)[0]
    assert a == pytest.approx(b, rel=1e-10, abs=1e-300)


def test_matches_fine_quadrature_2d():
    from oracles import dunavant_abs_power

    rng = np.random.default_rng(0)
    for _ in range(5):
        v = rng.random(3)
        a = rng.uniform(0.3, 4)
        exact = linear_power_integrals([0.5], [v], a)[0]
        assert exact == pytest.approx(dunavant_abs_power(TRI, v, a, level=200), rel=1e-4)
