import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from makai.constants import (
    ExponentPair,
    Weight1D,
    abs_power_cells,
    as_pair,
    c_pq,
    hp_constant,
    mu_p_numeric,
    pi_p,
    pi_pq,
    pi_pq_numeric,
)
from makai.errors import DomainError
from oracles import pi_p_sine_form, pi_pq_reference


def test_exponent_pair_validation():
    assert ExponentPair(2, 1).moment_exponent == 2
    assert ExponentPair(3, 3).diagonal
    for bad in [(1, 2), (0.5, 0.5), (1, 1), (math.inf, 1), (2, 0.5)]:
        with pytest.raises(DomainError):
            ExponentPair(*bad)
    assert tuple(as_pair((3, 2))) == (3.0, 2.0)


def test_known_values():
    assert pi_pq((2, 1)) == pytest.approx(2 * math.sqrt(3), rel=1e-14)
    assert pi_p(2) == pytest.approx(math.pi, rel=1e-14)
    assert c_pq((2, 1)) == pytest.approx(1.0, abs=1e-12)
    assert c_pq((2, 2)) == pytest.approx(math.pi**2 / 4, abs=1e-12)


@pytest.mark.parametrize("p,q", [(2, 1), (3, 2), (4, 1.5), (1.5, 1), (2.5, 2.5), (6, 3)])
def test_closed_form_against_quadrature(p, q):
    assert pi_pq((p, q)) == pytest.approx(pi_pq_reference(p, q), rel=1e-8)


@pytest.mark.parametrize("p", [1.2, 1.5, 2, 3, 7])
def test_diagonal_sine_form(p):
    assert pi_p(p) == pytest.approx(pi_p_sine_form(p), rel=1e-12)
    assert hp_constant(p) == pytest.approx((pi_p(p) / 2) ** p)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.05, 8), st.floats(0.0, 1.0))
def test_c_pq_positive_and_q1_identity(p, frac):
    q = 1 + frac * (p - 1)
    assert c_pq((p, q)) > 0
    # pi_{p,1} makes C_{p,1} collapse to 1 for every p
    assert c_pq((p, 1)) == pytest.approx(1.0, rel=1e-10)


def test_abs_power_cells_sign_change():
    u = np.array([1.0, -1.0])
    # |u| is a tent of height 1 on each half of the cell
    assert abs_power_cells(u, 2.0, 2.0)[0] == pytest.approx(2 * 1 / 3)


@pytest.mark.slow
@pytest.mark.parametrize("pq", [(2, 1), (2, 2), (3, 2), (4, 4), (1.5, 1)])
def test_pi_pq_numeric_is_tight_upper_bound(pq):
    exact = pi_pq(pq)
    num = pi_pq_numeric(pq, 2000)
    assert exact <= num <= exact * (1 + 1e-5)


def test_pi_pq_numeric_small_grid():
    res = pi_pq_numeric((2, 2), 64, restarts=1, full_output=True)
    assert res.value >= math.pi
    assert res.value == pytest.approx(math.pi, rel=1e-3)
    assert all(b <= a * (1 + 1e-12) for a, b in zip(res.history, res.history[1:]))


def test_mu_p_constant_weight_small():
    L, p = 2.0, 2.0
    val = mu_p_numeric(Weight1D.constant(L), p, 200)
    assert val == pytest.approx(L**-p * (math.pi / 2) ** 2, rel=1e-3)


def test_mu_p_rejects_bad_weight():
    with pytest.raises(DomainError):
        mu_p_numeric(Weight1D(1.0, lambda t: 1 - 2 * t), 2.0, 64)
    with pytest.raises(DomainError):
        mu_p_numeric(Weight1D.constant(1.0), 1.0, 64)


def test_step_weight():
    w = Weight1D.steps(1.0, [0.5], [2.0, 1.0])
    assert w.monotone
    np.testing.assert_array_equal(w(np.array([0.1, 0.6])), [2.0, 1.0])
    with pytest.raises(DomainError):
        Weight1D.steps(1.0, [0.5], [1.0])
