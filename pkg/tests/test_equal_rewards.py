import time
from fractions import Fraction
from math import comb

import pytest

from app.config import SolverLimits
from app.core.errors import CapacityError, DomainError, RegimeError
from app.core.game import GameInstance
from app.solvers.equal_rewards import (
    F,
    F_float,
    UniformFamily,
    asymptotic_ratio_fixed_k,
    asymptotic_ratio_fixed_theta,
    optimal_m,
    solve_equal,
    solve_equal_instance,
    success_probability,
    success_probability_bounds,
)
from app.solvers.k1 import equal_split_lower_bound
from app.solvers.lp_oracle import oracle_value


@pytest.mark.parametrize(
    "n,k,m,expected",
    [
        (6, 2, 2, Fraction(4, 5)),
        (4, 2, 1, Fraction(1, 2)),
        (5, 3, 0, Fraction(0)),
        (5, 3, 3, Fraction(0)),
    ],
)
def test_F(n, k, m, expected):
    assert F(n, k, m) == expected


@pytest.mark.parametrize("n,k,m_star,value", [(6, 2, 2, Fraction(4, 5)), (4, 2, 1, Fraction(1, 2)), (2, 1, 1, Fraction(1, 2))])
def test_solve_equal(n, k, m_star, value):
    sol = solve_equal(n, k)
    assert sol.m_star == m_star
    assert sol.value == value


def test_scaled_reward():
    assert solve_equal(6, 2, 3).value == Fraction(12, 5)


def test_refutes_naive_generalization():
    # R0/(k+1)^2 is a lower bound only; the value is not R0/(k+1)^2 for k >= 2
    inst = GameInstance.create([1] * 6, 2)
    value = solve_equal_instance(inst).value
    assert value == Fraction(4, 5)
    assert equal_split_lower_bound(inst) == Fraction(6, 9)
    assert value != Fraction(6, 9)
    assert equal_split_lower_bound(inst) <= value


def test_unimodal():
    for n in range(2, 41):
        for k in range(1, n):
            peak = Fraction(n - k, k + 1)
            for m in range(0, n):
                if m < peak:
                    assert F(n, k, m + 1) >= F(n, k, m)
                else:
                    assert F(n, k, m + 1) <= F(n, k, m)
            assert optimal_m(n, k) == -(-(n - k) // (k + 1))


def test_success_probability_identity():
    for n in range(2, 31):
        for k in range(1, n):
            for m in range(0, n - k + 1):
                assert success_probability(n, k, m) == Fraction(comb(n - m, k), comb(n, k))


def test_success_probability_bounds():
    for n in list(range(2, 200)) + [1000, 5000, 10_000]:
        for k in {1, 2, 3, max(1, n // 3), n - 1}:
            if not 1 <= k <= n - 1:
                continue
            lower, value, upper = success_probability_bounds(n, k)
            assert lower < value + 1e-12
            assert value <= upper + 1e-12


def test_asymptotics():
    assert asymptotic_ratio_fixed_theta(Fraction(1, 2)) == (1, Fraction(1, 2))
    assert asymptotic_ratio_fixed_theta(Fraction(1, 3)) == (2, Fraction(8, 9))
    assert asymptotic_ratio_fixed_theta(Fraction(1, 4)) == (3, Fraction(81, 64))
    assert asymptotic_ratio_fixed_k(1) == Fraction(1, 4)
    assert asymptotic_ratio_fixed_k(2) == Fraction(4, 27)
    assert abs(float(asymptotic_ratio_fixed_k(10)) - 0.03505) < 1e-4

    n = 3000
    assert abs(F_float(n, 2, optimal_m(n, 2)) / n - 4 / 27) <= 0.01
    m = optimal_m(n, 1000)
    assert m == 2
    assert abs(F_float(n, 1000, m) - m * (2 / 3) ** m) <= 0.01

    with pytest.raises(DomainError):
        asymptotic_ratio_fixed_theta(Fraction(2, 3))


def test_large_n_limits_are_fast():
    start = time.perf_counter()
    n = 3000
    exact = solve_equal(n, 2)
    assert abs(float(exact.value) / n - 4 / 27) <= 0.01
    assert abs(F_float(n, 2, exact.m_star) - float(exact.value)) <= 1e-6 * n
    m, limit = asymptotic_ratio_fixed_theta(Fraction(1, 3))
    assert abs(F_float(n, n // 3, m) - float(limit)) <= 0.01
    assert time.perf_counter() - start < 5


def test_F_float_matches_exact():
    for n, k, m in [(10, 3, 2), (20, 4, 4), (8, 1, 4)]:
        assert abs(F_float(n, k, m) - float(F(n, k, m))) < 1e-12


def test_uniform_family():
    fam = UniformFamily(5, 2)
    assert fam.count == 10
    assert fam.probability == Fraction(1, 10)
    assert len(fam.hider().atoms) == 10
    with pytest.raises(CapacityError):
        fam.searcher(SolverLimits(uniform_materialize_cap=9))


def test_certified_and_matches_oracle():
    for n in range(2, 8):
        for k in range(1, n):
            inst = GameInstance.create([3] * n, k)
            sol = solve_equal_instance(inst)
            assert sol.value == oracle_value(inst)
            assert sol.to_solution(inst).certified


def test_regime_errors():
    with pytest.raises(RegimeError):
        solve_equal_instance(GameInstance.create((1, 2, 1), 1))
    with pytest.raises(DomainError):
        solve_equal(3, 3)
