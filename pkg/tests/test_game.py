from fractions import Fraction

import pytest

from app.config import SolverLimits
from app.core.errors import CapacityError, InvalidInstanceError, InvalidStrategyError
from app.core.game import (
    GameInstance,
    HiderStrategy,
    Hypergraph,
    Method,
    SearcherStrategy,
    certify,
    expected_payoff,
    guarantee_of_hider,
    guarantee_of_searcher,
    hider_marginals,
    make_solution,
    payoff,
    searcher_payoffs,
    to_fraction,
)
from app.core.subsets import count_subsets_upto, from_mask, subsets_upto, to_mask


@pytest.mark.parametrize(
    "rewards,S,H,expected",
    [
        ((2, 3, 5), {1, 2}, {3}, 5),
        ((2, 3, 5), {1, 2}, {2}, 0),
        ((10, 10, 1), {3}, {1}, 1),
    ],
)
def test_payoff(rewards, S, H, expected):
    inst = GameInstance.create(rewards, 1)
    assert payoff(inst, S, H) == expected


def test_payoff_rejects_wrong_trap_size():
    inst = GameInstance.create((2, 3, 5), 1)
    with pytest.raises(InvalidStrategyError):
        payoff(inst, {1}, {2, 3})


def test_expected_payoff_examples():
    inst = GameInstance.create((10, 10, 1), 1)
    p = SearcherStrategy.from_atoms([([1], Fraction(1, 2)), ([2], Fraction(1, 2))])
    assert expected_payoff(inst, p, HiderStrategy.point([1])) == 5
    q = HiderStrategy.from_atoms([([1], Fraction(1, 2)), ([2], Fraction(1, 2))])
    assert expected_payoff(inst, p, q) == 5

    inst2 = GameInstance.create((2, 3, 5), 1)
    assert expected_payoff(inst2, SearcherStrategy.point([1, 2]), HiderStrategy.point([3])) == 5


def test_guarantee_of_searcher_examples():
    inst = GameInstance.create((10, 10, 1), 1)
    p = SearcherStrategy.from_atoms([([1], Fraction(1, 2)), ([2], Fraction(1, 2))])
    assert guarantee_of_searcher(inst, p) == 5

    eq = GameInstance.create((1, 1, 1, 1), 1)
    uniform = SearcherStrategy.from_atoms(([b], Fraction(1, 4)) for b in range(1, 5))
    assert guarantee_of_searcher(eq, uniform) == Fraction(3, 4)


def test_oversized_edge_is_always_hit():
    inst = GameInstance.create((4, 4, 2), 2)
    assert guarantee_of_searcher(inst, SearcherStrategy.point([1, 2])) == 0


def test_guarantees_bracket_expected_payoff(rng):
    for _ in range(20):
        n = rng.randint(2, 5)
        k = rng.randint(1, n - 1)
        inst = GameInstance.create([rng.randint(0, 9) for _ in range(n)], k)
        edges = list(subsets_upto(range(1, n + 1), n - k))
        hs = list(inst.hider_sets())
        w = [rng.randint(1, 5) for _ in edges]
        p = SearcherStrategy.from_atoms((e, Fraction(x, sum(w))) for e, x in zip(edges, w))
        v = [rng.randint(1, 5) for _ in hs]
        q = HiderStrategy.from_atoms((h, Fraction(x, sum(v))) for h, x in zip(hs, v))
        assert guarantee_of_searcher(inst, p) <= expected_payoff(inst, p, q) <= guarantee_of_hider(inst, q)


def test_bilinear_and_scaling():
    inst = GameInstance.create((5, 4, 3, 1), 2)
    p1 = SearcherStrategy.point([1])
    p2 = SearcherStrategy.from_atoms([([2], Fraction(1, 3)), ([3, 4], Fraction(2, 3))])
    q = HiderStrategy.from_atoms([([1, 2], Fraction(1, 2)), ([3, 4], Fraction(1, 2))])
    a = Fraction(2, 7)
    mix = SearcherStrategy.from_atoms(
        [([1], a), ([2], (1 - a) * Fraction(1, 3)), ([3, 4], (1 - a) * Fraction(2, 3))]
    )
    assert expected_payoff(inst, mix, q) == a * expected_payoff(inst, p1, q) + (1 - a) * expected_payoff(inst, p2, q)

    c = Fraction(7, 3)
    big = inst.scaled(c)
    assert expected_payoff(big, p2, q) == c * expected_payoff(inst, p2, q)
    assert guarantee_of_searcher(big, p2) == c * guarantee_of_searcher(inst, p2)
    assert guarantee_of_hider(big, q) == c * guarantee_of_hider(inst, q)


def test_instance_validation():
    with pytest.raises(InvalidInstanceError):
        GameInstance.create((1, 2), 0)
    with pytest.raises(InvalidInstanceError):
        GameInstance.create((1, 2), 2)
    with pytest.raises(InvalidInstanceError):
        GameInstance.create((1, -2, 3), 1)
    with pytest.raises(InvalidInstanceError):
        GameInstance.create((1, 2, 3), 1, Hypergraph.one_uniform([4]))
    with pytest.raises(InvalidInstanceError):
        Hypergraph.explicit([[1, 2], [2, 1]])


def test_sort_order_is_stable():
    inst = GameInstance.create((1, 3, 3, 2), 1)
    assert inst.order == (2, 3, 4, 1)
    assert inst.sorted_rewards == (3, 3, 2, 1)


def test_to_fraction_is_exact():
    assert to_fraction(0.1) == Fraction(1, 10)
    assert to_fraction("3/7") == Fraction(3, 7)
    with pytest.raises(TypeError):
        to_fraction(True)


def test_strategy_validation():
    with pytest.raises(InvalidStrategyError):
        SearcherStrategy.from_atoms([([1], Fraction(1, 2))])
    with pytest.raises(InvalidStrategyError):
        HiderStrategy.from_atoms([([1], Fraction(1, 2)), ([1], Fraction(1, 2))])
    with pytest.raises(InvalidStrategyError):
        SearcherStrategy.from_atoms([([1], Fraction(3, 2)), ([2], Fraction(-1, 2))])

    inst = GameInstance.create((3, 2, 1), 1, Hypergraph.one_uniform([1, 2]))
    with pytest.raises(InvalidStrategyError):
        expected_payoff(inst, SearcherStrategy.point([3]), HiderStrategy.point([1]))


def test_hider_marginals():
    q = HiderStrategy.from_atoms([([1, 2], Fraction(1, 3)), ([2, 3], Fraction(2, 3))])
    assert hider_marginals(4, q) == (Fraction(1, 3), Fraction(1), Fraction(2, 3), Fraction(0))


def test_certificates_and_caps():
    inst = GameInstance.create((10, 10, 1), 1)
    p = SearcherStrategy.from_atoms([([1], Fraction(1, 2)), ([2], Fraction(1, 2))])
    q = HiderStrategy.from_atoms([([1], Fraction(1, 2)), ([2], Fraction(1, 2))])
    sol = make_solution(inst, Fraction(5), p, q, Method.ONE_UNIFORM)
    assert sol.certified is False  # on the complete hypergraph {1,3} earns more than 5

    one = GameInstance.create((10, 10, 1), 1, Hypergraph.one_uniform([1, 2, 3]))
    sol = make_solution(one, Fraction(5), p, q, Method.ONE_UNIFORM)
    assert sol.certified
    assert sol.certificates.searcher_guarantee == sol.certificates.hider_guarantee == 5

    tiny = SolverLimits(sweep_max_pure=1)
    assert certify(one, p, q, tiny) is None
    with pytest.raises(CapacityError):
        searcher_payoffs(one, p, tiny)


def test_subset_helpers():
    assert from_mask(to_mask({1, 3, 4})) == frozenset({1, 3, 4})
    assert count_subsets_upto(4, 2) == 10
    assert [sorted(e) for e in subsets_upto((1, 2, 3), 2)] == [[1], [2], [3], [1, 2], [1, 3], [2, 3]]
