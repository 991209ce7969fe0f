# app/solvers/n4k2.py
"""
Four boxes, two booby traps, complete hypergraph.

One of three searcher mixtures is optimal:
  A  the four singletons, weights ~ 1/r_i
  B  {1}, {2}, {3,4}, weights ~ 1/r(S)
  C  {1}, {2}, {3}, {1,4}, {2,4}, {3,4}, weights ~ 1/r(S)
and the value is the largest of V_A, V_B, V_C. Hider mixtures for A and B
come from picking a point (x, y) in a box cut out by linear constraints;
for C they are explicit.

Labels 1..4 below always refer to the descending-reward view.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import permutations
from typing import Any, Dict, List, Sequence, Tuple

from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import DomainError, InfeasibleRegionError, RegimeError
from app.core.game import (
    GameInstance,
    HiderStrategy,
    Method,
    SearcherStrategy,
    Solution,
    make_solution,
    to_fraction,
)

logger = logging.getLogger(__name__)

Rewards4 = Tuple[Fraction, Fraction, Fraction, Fraction]


class Regime(str, Enum):
    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class ABCValues:
    rewards: Rewards4
    vA: Fraction
    vB: Fraction
    vC: Fraction
    chosen: Regime

    @property
    def value(self) -> Fraction:
        return {Regime.A: self.vA, Regime.B: self.vB, Regime.C: self.vC}[self.chosen]


@dataclass(frozen=True)
class HiderFeasibilityBox:
    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction
    s_lo: Fraction
    s_hi: Fraction

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return (
            self.x_lo <= x <= self.x_hi
            and self.y_lo <= y <= self.y_hi
            and self.s_lo <= x + y <= self.s_hi
        )

    def corner(self) -> Tuple[Fraction, Fraction]:
        """
        Smallest feasible x + y, then smallest x reaching it. Raises when the
        box is empty.
        """
        s = max(self.s_lo, self.x_lo + self.y_lo)
        if s > min(self.s_hi, self.x_hi + self.y_hi) or self.x_lo > self.x_hi or self.y_lo > self.y_hi:
            raise InfeasibleRegionError(f"empty feasibility box {self}")
        x = max(self.x_lo, s - self.y_hi)
        y = s - x
        if not self.contains(x, y):
            raise InfeasibleRegionError(f"corner ({x}, {y}) escapes {self}")
        return x, y


def _check_sorted_positive(r: Sequence[Any]) -> Rewards4:
    rs = tuple(to_fraction(v) for v in r)
    if len(rs) != 4:
        raise DomainError("n4k2 formulas need exactly four rewards")
    if any(v <= 0 for v in rs):
        raise DomainError("n4k2 formulas need positive rewards; use the LP oracle")
    if not rs[0] >= rs[1] >= rs[2] >= rs[3]:
        raise DomainError("rewards must be sorted in descending order")
    return rs  # type: ignore[return-value]


def pairwise_conditions(r: Sequence[Any]) -> Dict[str, bool]:
    """The three comparison inequalities: A>=B, A>=C, B>=C."""
    r1, r2, r3, r4 = _check_sorted_positive(r)
    return {
        "A>=B": 1 / r1 + 1 / r2 >= 1 / r3 + 1 / r4 - 2 / (r3 + r4),
        "A>=C": 1 / r4 <= 1 / (r1 + r4) + 1 / (r2 + r4) + 1 / (r3 + r4),
        "B>=C": 1 / r1 + 1 / r2 + 1 / (r3 + r4) <= 1 / r3 + 1 / (r1 + r4) + 1 / (r2 + r4),
    }


def ab_holds_for_all_relabellings(r: Sequence[Any]) -> bool:
    """If A>=B holds for sorted rewards, it holds for every relabelling."""
    rs = _check_sorted_positive(r)
    for i, j, k, l in permutations(range(4)):
        a, b, c, d = rs[i], rs[j], rs[k], rs[l]
        if not 1 / a + 1 / b >= 1 / c + 1 / d - 2 / (c + d):
            return False
    return True


def ac_holds_for_all_relabellings(r: Sequence[Any]) -> bool:
    """If A>=C holds for sorted rewards, it holds for every relabelling."""
    rs = _check_sorted_positive(r)
    for i, j, k, l in permutations(range(4)):
        a, b, c, d = rs[i], rs[j], rs[k], rs[l]
        if not 1 / d <= 1 / (a + d) + 1 / (b + d) + 1 / (c + d):
            return False
    return True


def abc_values(r: Sequence[Any]) -> ABCValues:
    r1, r2, r3, r4 = rs = _check_sorted_positive(r)
    vA = 2 / (1 / r1 + 1 / r2 + 1 / r3 + 1 / r4)
    vB = 1 / (1 / r1 + 1 / r2 + 1 / (r3 + r4))
    vC = 2 / (1 / r1 + 1 / r2 + 1 / r3 + 1 / (r1 + r4) + 1 / (r2 + r4) + 1 / (r3 + r4))
    # ties: A before B before C
    if vA >= vB and vA >= vC:
        chosen = Regime.A
    elif vB >= vC:
        chosen = Regime.B
    else:
        chosen = Regime.C
    return ABCValues(rewards=rs, vA=vA, vB=vB, vC=vC, chosen=chosen)


def searcher_strategy_n4k2(values: ABCValues) -> SearcherStrategy:
    r1, r2, r3, r4 = values.rewards
    if values.chosen is Regime.A:
        edges = [([1], r1), ([2], r2), ([3], r3), ([4], r4)]
    elif values.chosen is Regime.B:
        edges = [([1], r1), ([2], r2), ([3, 4], r3 + r4)]
    else:
        edges = [
            ([1], r1), ([2], r2), ([3], r3),
            ([1, 4], r1 + r4), ([2, 4], r2 + r4), ([3, 4], r3 + r4),
        ]
    norm = sum((1 / w for _, w in edges), Fraction(0))
    return SearcherStrategy.from_atoms((e, (1 / w) / norm) for e, w in edges)


def _pairs(q: Dict[Tuple[int, int], Fraction]) -> HiderStrategy:
    return HiderStrategy.from_atoms((list(pair), p) for pair, p in q.items())


def hider_strategy_C(r: Sequence[Any], vC: Any) -> HiderStrategy:
    r1, r2, r3, r4 = _check_sorted_positive(r)
    v = to_fraction(vC)
    cond = pairwise_conditions((r1, r2, r3, r4))
    if cond["A>=C"] and 1 / r4 != 1 / (r1 + r4) + 1 / (r2 + r4) + 1 / (r3 + r4):
        raise RegimeError("strategy C needs 1/(r1+r4) + 1/(r2+r4) + 1/(r3+r4) <= 1/r4")
    if cond["B>=C"] and 1 / r1 + 1 / r2 + 1 / (r3 + r4) != 1 / r3 + 1 / (r1 + r4) + 1 / (r2 + r4):
        raise RegimeError("strategy C needs 1/r1 + 1/r2 + 1/(r3+r4) >= 1/r3 + 1/(r1+r4) + 1/(r2+r4)")
    q = {
        (1, 2): v / (r3 + r4),
        (1, 3): v / (r2 + r4),
        (2, 3): v / (r1 + r4),
        (1, 4): 1 - v / (r2 + r4) - v / (r3 + r4) - v / r1,
        (2, 4): 1 - v / (r1 + r4) - v / (r3 + r4) - v / r2,
        (3, 4): 1 - v / (r1 + r4) - v / (r2 + r4) - v / r3,
    }
    if any(p < 0 for p in q.values()):
        raise InfeasibleRegionError(f"strategy C hider has a negative weight: {q}")
    return _pairs(q)


def feasibility_box_B(r: Sequence[Any]) -> HiderFeasibilityBox:
    """x = q13/V_B, y = q23/V_B."""
    r1, r2, r3, r4 = _check_sorted_positive(r)
    return HiderFeasibilityBox(
        x_lo=max(Fraction(0), 1 / r2 - 1 / (r2 + r3)),
        x_hi=1 / (r2 + r4),
        y_lo=max(Fraction(0), 1 / r1 - 1 / (r1 + r3)),
        y_hi=1 / (r1 + r4),
        s_lo=1 / r1 + 1 / r2 - 1 / r3 + 1 / (r3 + r4),
        s_hi=1 / r4 - 1 / (r3 + r4),
    )


def hider_strategy_B(r: Sequence[Any], vB: Any) -> HiderStrategy:
    r1, r2, r3, r4 = rs = _check_sorted_positive(r)
    v = to_fraction(vB)
    cond = pairwise_conditions(rs)
    tie_ab = 1 / r1 + 1 / r2 == 1 / r3 + 1 / r4 - 2 / (r3 + r4)
    if (cond["A>=B"] and not tie_ab) or not cond["B>=C"]:
        raise RegimeError("strategy B needs V_B >= V_A and V_B >= V_C")
    x, y = feasibility_box_B(rs).corner()
    q = {
        (1, 2): v / (r3 + r4),
        (3, 4): Fraction(0),
        (1, 3): x * v,
        (2, 3): y * v,
        (1, 4): (1 / r2 - x) * v,
        (2, 4): (1 / r1 - y) * v,
    }
    return _pairs({pair: p for pair, p in q.items() if p})


def feasibility_box_A(r: Sequence[Any]) -> HiderFeasibilityBox:
    """x = q34/V_A, y = q24/V_A."""
    r1, r2, r3, r4 = _check_sorted_positive(r)
    a = (-1 / r1 - 1 / r2 + 1 / r3 + 1 / r4) / 2
    b = (-1 / r1 + 1 / r2 - 1 / r3 + 1 / r4) / 2
    c = (1 / r1 + 1 / r2 + 1 / r3 - 1 / r4) / 2
    return HiderFeasibilityBox(
        x_lo=max(Fraction(0), -a),
        x_hi=min(1 / (r1 + r2), 1 / (r3 + r4) - a),
        y_lo=max(Fraction(0), -b),
        y_hi=min(1 / (r1 + r3), 1 / (r2 + r4) - b),
        s_lo=max(1 / r1 - 1 / (r1 + r4), c - 1 / (r2 + r3)),
        s_hi=min(1 / r1, c),
    )


def hider_strategy_A(r: Sequence[Any], vA: Any) -> HiderStrategy:
    r1, r2, r3, r4 = rs = _check_sorted_positive(r)
    v = to_fraction(vA)
    cond = pairwise_conditions(rs)
    if not (cond["A>=B"] and cond["A>=C"]):
        raise RegimeError("strategy A needs V_A >= V_B and V_A >= V_C")
    a = (-1 / r1 - 1 / r2 + 1 / r3 + 1 / r4) / 2
    b = (-1 / r1 + 1 / r2 - 1 / r3 + 1 / r4) / 2
    c = (1 / r1 + 1 / r2 + 1 / r3 - 1 / r4) / 2
    x, y = feasibility_box_A(rs).corner()
    q = {
        (1, 2): (x + a) * v,
        (1, 3): (y + b) * v,
        (1, 4): (c - x - y) * v,
        (2, 3): (1 / r1 - x - y) * v,
        (2, 4): y * v,
        (3, 4): x * v,
    }
    return _pairs({pair: p for pair, p in q.items() if p})


def _unsort(instance: GameInstance, atoms, cls):
    # sorted label i -> user box instance.order[i-1]
    return cls.from_atoms(([instance.order[i - 1] for i in e], p) for e, p in atoms)


def solve_n4k2(instance: GameInstance, limits: SolverLimits = DEFAULT_LIMITS) -> Solution:
    if instance.n != 4 or instance.k != 2 or not instance.is_complete:
        raise RegimeError("n4k2 requires n=4, k=2 on the complete hypergraph")
    values = abc_values(instance.sorted_rewards)
    rs = values.rewards
    if values.chosen is Regime.A:
        hider = hider_strategy_A(rs, values.vA)
    elif values.chosen is Regime.B:
        hider = hider_strategy_B(rs, values.vB)
    else:
        hider = hider_strategy_C(rs, values.vC)
    searcher = searcher_strategy_n4k2(values)
    logger.debug("n4k2 regime %s: vA=%s vB=%s vC=%s", values.chosen.value, values.vA, values.vB, values.vC)
    return make_solution(
        instance,
        values.value,
        _unsort(instance, searcher.atoms, SearcherStrategy),
        _unsort(instance, hider.atoms, HiderStrategy),
        Method.N4K2,
        limits,
    )


__all__ = [
    "Regime",
    "ABCValues",
    "HiderFeasibilityBox",
    "pairwise_conditions",
    "ab_holds_for_all_relabellings",
    "ac_holds_for_all_relabellings",
    "abc_values",
    "searcher_strategy_n4k2",
    "hider_strategy_A",
    "hider_strategy_B",
    "hider_strategy_C",
    "feasibility_box_A",
    "feasibility_box_B",
    "solve_n4k2",
]
