import math

import numpy as np
import pytest

from makai import geometry as g
from makai.errors import DomainError
from makai.measure import (
    distance_moment,
    hersch_protter_bound,
    makai_lower_bound,
    monte_carlo_moment,
    moment_upper_bound,
    simplex_linear_power,
    slab_moment_asymptote,
)
from oracles import parallel_body_moment, regular_polygon_moment


def test_square_moments(unit_square):
    assert distance_moment(unit_square, 1).value == pytest.approx(1 / 6, abs=1e-12)
    assert distance_moment(unit_square, 2).value == pytest.approx(1 / 24, abs=1e-12)
    assert distance_moment(unit_square, 0).value == pytest.approx(1.0)


@pytest.mark.parametrize("n", [3, 5, 6, 12])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.5, 7.0])
def test_regular_polygon_moment(n, alpha):
    P = g.regular_polygon(n, 1.3)
    assert distance_moment(P, alpha).value == pytest.approx(regular_polygon_moment(n, 1.3, alpha), rel=1e-11)


@pytest.mark.parametrize("seed", range(4))
def test_random_polygon_against_parallel_bodies(seed):
    rng = np.random.default_rng(seed)
    P = g.from_vertices(rng.normal(size=(12, 2)))
    for alpha in (0.5, 2.0, 3.7):
        ref, _ = parallel_body_moment(P.ordered_vertices(), alpha)
        assert distance_moment(P, alpha).value == pytest.approx(ref, rel=1e-8)


def test_box3d_moment():
    # cube [0,1]^3: |{d > t}| = (1 - 2t)^3, int d = int_0^{1/2} (1 - 2t)^3 dt = 1/8
    assert distance_moment(g.box([0, 0, 0], [1, 1, 1]), 1).value == pytest.approx(1 / 8)


def test_monte_carlo_agrees(unit_square):
    res = monte_carlo_moment(unit_square, [1.0, 2.0], n=200_000, seed=4)
    assert abs(res[0].value - 1 / 6) < 4 * res[0].error
    assert abs(res[1].value - 1 / 24) < 4 * res[1].error


def test_simplex_linear_power_routes():
    T = [[0, 0], [1, 0], [0, 1]]
    assert simplex_linear_power(T, [0, 1, 0], 2) == pytest.approx(1 / 12)
    assert simplex_linear_power(T, [0, 1, 0], 2.0000001) == pytest.approx(1 / 12, rel=1e-6)
    with pytest.raises(DomainError):
        simplex_linear_power(T, [-1, 1, 0], 1)


def test_bounds_on_square(unit_square):
    assert makai_lower_bound(unit_square, (2, 1)) == pytest.approx(24)
    assert makai_lower_bound(unit_square, (2, 2)) == pytest.approx(math.pi**2)
    assert hersch_protter_bound(unit_square, (2, 1)) == pytest.approx(12)
    assert moment_upper_bound(unit_square, 1) == pytest.approx(0.25)


@pytest.mark.parametrize("P", [g.regular_polygon(5), g.box([0, 0, 0], [1, 2, 3]),
                               g.simplex_polytope([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])])
@pytest.mark.parametrize("alpha", [0.5, 1, 2])
def test_moment_upper_bound_holds(P, alpha):
    assert distance_moment(P, alpha).value <= moment_upper_bound(P, alpha)


def test_makai_dominates_hersch_protter():
    # Makai's moment is at most the Hersch-Protter volume term
    P = g.regular_polygon(7)
    for e in [(2, 1), (3, 2), (4, 1.5)]:
        assert makai_lower_bound(P, e) >= hersch_protter_bound(P, e) * (1 - 1e-12)


def test_slab_moment_ratio_tends_to_one():
    ratios = [distance_moment(g.slab(L), 2).value / slab_moment_asymptote(L, 2) for L in (2, 4, 8)]
    assert ratios == sorted(ratios) and ratios[-1] < 1
    assert ratios == pytest.approx([0.75, 0.875, 0.9375])
