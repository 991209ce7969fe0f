import time
from fractions import Fraction

import pytest

from app.config import SolverLimits
from app.core.errors import CapacityError, RegimeError
from app.core.game import GameInstance, HiderStrategy, hider_payoffs, searcher_payoffs
from app.solvers.k1 import (
    best_partition,
    brute_force_partition,
    equal_split_lower_bound,
    quadratic_identity_check,
    solve_k1,
)
from app.solvers.lp_oracle import oracle_value


@pytest.mark.parametrize(
    "rewards,s_star,diff",
    [
        ((1, 1), {1}, 0),
        ((3, 1, 1, 1), {1}, 0),
        ((5, 4, 3), {1}, 2),
        ((10, 10, 1), {1}, 1),
    ],
)
def test_best_partition_examples(rewards, s_star, diff):
    part = best_partition(rewards)
    assert part.s_star == frozenset(s_star)
    assert part.diff == diff


def test_zero_rewards_go_to_the_complement():
    part = best_partition((0, 2, 2, 0))
    assert part.s_star == frozenset({2})
    assert part.diff == 0


def test_ckk_agrees_with_brute_force(rng):
    for _ in range(150):
        n = rng.randint(2, 12)
        rewards = [rng.randint(0, 40) for _ in range(n)]
        assert best_partition(rewards) == brute_force_partition(rewards)


def test_ckk_fractional_rewards(rng):
    for _ in range(60):
        n = rng.randint(2, 10)
        rewards = [Fraction(rng.randint(0, 30), rng.randint(1, 6)) for _ in range(n)]
        assert best_partition(rewards) == brute_force_partition(rewards)


def test_ckk_odd_total_finishes_quickly(rng):
    for _ in range(5):
        rewards = [rng.randint(1, 100) for _ in range(26)]
        if sum(rewards) % 2 == 0:
            rewards[0] += 1
        start = time.perf_counter()
        part = best_partition(rewards)
        assert time.perf_counter() - start < 5
        assert part.diff % 2 == 1
        assert part.diff == abs(part.r_s - part.r_complement)
        assert rewards.index(max(rewards)) + 1 in part.s_star


def test_partition_cap():
    with pytest.raises(CapacityError):
        best_partition([1] * 5, SolverLimits(partition_max_n=4))


@pytest.mark.parametrize(
    "rewards,value",
    [
        ((1, 1), Fraction(1, 2)),
        ((5, 4, 3), Fraction(35, 12)),
        ((10, 10, 1), Fraction(110, 21)),
    ],
)
def test_solve_k1_values(rewards, value):
    inst = GameInstance.create(rewards, 1)
    sol = solve_k1(inst)
    assert sol.value == value
    assert sol.certified


def test_solve_k1_strategies():
    inst = GameInstance.create((1, 1), 1)
    sol = solve_k1(inst)
    assert sol.searcher.as_dict() == {frozenset({1}): Fraction(1, 2), frozenset({2}): Fraction(1, 2)}

    inst = GameInstance.create((5, 4, 3), 1)
    sol = solve_k1(inst)
    assert sol.hider.as_dict() == {
        frozenset({1}): Fraction(5, 12),
        frozenset({2}): Fraction(4, 12),
        frozenset({3}): Fraction(3, 12),
    }


def test_quadratic_identity():
    inst = GameInstance.create((5, 4, 3), 1)
    assert quadratic_identity_check(inst, {1}) == 35
    assert quadratic_identity_check(inst, set()) == 0
    assert quadratic_identity_check(inst, {1, 2, 3}) == 0


def test_equalizers(rng):
    for _ in range(30):
        n = rng.randint(2, 7)
        inst = GameInstance.create([rng.randint(1, 30) for _ in range(n)], 1)
        sol = solve_k1(inst)
        assert all(v == sol.value for _, v in searcher_payoffs(inst, sol.searcher))
        R0 = inst.total
        for S, v in hider_payoffs(inst, sol.hider):
            assert v == inst.r(S) * (R0 - inst.r(S)) / R0
            assert v <= sol.value


def test_perfect_partition_iff_quarter(rng):
    for _ in range(60):
        n = rng.randint(2, 12)
        inst = GameInstance.create([rng.randint(1, 15) for _ in range(n)], 1)
        sol = solve_k1(inst)
        part = best_partition(inst.rewards)
        assert sol.value <= inst.total / 4
        assert (sol.value == inst.total / 4) == (part.diff == 0)
        assert equal_split_lower_bound(inst) == inst.total / 4


def test_matches_oracle(rng):
    for _ in range(30):
        n = rng.randint(2, 8)
        inst = GameInstance.create([rng.randint(1, 100) for _ in range(n)], 1)
        assert solve_k1(inst).value == oracle_value(inst)


def test_all_zero_rewards():
    sol = solve_k1(GameInstance.create((0, 0, 0), 1))
    assert sol.value == 0
    assert sol.certified


def test_regime():
    with pytest.raises(RegimeError):
        solve_k1(GameInstance.create((1, 2, 3), 2))


def test_hider_ignores_zero_reward_boxes():
    sol = solve_k1(GameInstance.create((3, 0, 3), 1))
    assert sol.hider == HiderStrategy.from_atoms([([1], Fraction(1, 2)), ([3], Fraction(1, 2))])
    assert sol.value == Fraction(3, 2)
