# app/solvers/one_uniform.py
"""
Closed-form solution of the game on a 1-uniform hypergraph.

The Searcher opens one box. Opening box j of the top-t boxes with
probability proportional to 1/r_j guarantees V(t) = (t - k) * lambda([t]);
the best t wins, and the Hider answers by trapping box j with probability
y_j = 1 - V(t*)/r_j, realised as an exact mixture of k-subsets by rotation.
"""
from __future__ import annotations

import logging
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import DomainError, RegimeError
from app.core.game import (
    GameInstance,
    HiderStrategy,
    HypergraphKind,
    Method,
    SearcherStrategy,
    Solution,
    make_solution,
    to_fraction,
)

logger = logging.getLogger(__name__)


def lambda_of(rewards: Sequence[Any], A: Iterable[int]) -> Fraction:
    """(sum_{i in A} 1/r_i)^-1, A given as 1-based positions into rewards."""
    positions = list(A)
    if not positions:
        raise DomainError("lambda needs a nonempty index set")
    acc = Fraction(0)
    for i in positions:
        r = to_fraction(rewards[i - 1])
        if r <= 0:
            raise DomainError(f"lambda is undefined: reward at position {i} is {r}")
        acc += 1 / r
    return 1 / acc


def _value_curve_sorted(rewards: Sequence[Fraction], k: int) -> List[Tuple[int, Fraction]]:
    curve = [(k, Fraction(0))]
    inv = sum((1 / r for r in rewards[:k]), Fraction(0))
    for t in range(k + 1, len(rewards) + 1):
        inv += 1 / rewards[t - 1]
        curve.append((t, (t - k) / inv))
    return curve


def _search_universe(instance: GameInstance) -> Tuple[int, ...]:
    """Searchable boxes with positive reward, in descending-reward order."""
    hg = instance.hypergraph
    if hg.kind is HypergraphKind.ONE_UNIFORM:
        allowed = set(hg.boxes)
    elif hg.kind is HypergraphKind.COMPLETE and instance.k == instance.n - 1:
        allowed = set(instance.boxes)
    else:
        raise RegimeError(
            "one-uniform solver needs a 1-uniform hypergraph or a complete one with k = n-1"
        )
    return tuple(b for b in instance.order if b in allowed and instance.reward(b) > 0)


def value_curve(instance: GameInstance) -> List[Tuple[int, Fraction]]:
    universe = _search_universe(instance)
    if len(universe) <= instance.k:
        logger.warning(
            "Only %d positive-reward searchable boxes for k=%d; value is 0",
            len(universe),
            instance.k,
        )
        return [(instance.k, Fraction(0))]
    return _value_curve_sorted([instance.reward(b) for b in universe], instance.k)


def value_step_matches_reward(rewards: Sequence[Any], k: int) -> bool:
    """V(t) >= V(t-1) iff r_t >= V(t), for every t in k+1..n (rewards sorted desc, positive)."""
    rs = [to_fraction(r) for r in rewards]
    curve = dict(_value_curve_sorted(rs, k))
    return all(
        (curve[t] >= curve[t - 1]) == (rs[t - 1] >= curve[t])
        for t in range(k + 1, len(rs) + 1)
    )


# -------------------------------------------------------------------
# Rotation method
# -------------------------------------------------------------------
def rotation_mixture(
    marginals: Sequence[Any],
    boxes: Optional[Sequence[int]] = None,
) -> HiderStrategy:
    """
    Exact hider mixture with the given per-box trap probabilities.

    Subintervals of lengths y_1..y_m are laid on [0, k] in the order given;
    theta in [0, 1) selects the boxes whose subintervals contain
    theta, theta+1, ..., theta+k-1. The selection only changes at the
    fractional parts of the prefix sums, so each constant piece becomes one
    atom weighted by its length.
    """
    ys = [to_fraction(y) for y in marginals]
    labels = list(boxes) if boxes is not None else list(range(1, len(ys) + 1))
    if len(labels) != len(ys):
        raise DomainError("marginals and box labels differ in length")
    for b, y in zip(labels, ys):
        if y < 0 or y > 1:
            raise DomainError(f"marginal of box {b} is {y}, outside [0, 1]")
    total = sum(ys, Fraction(0))
    if total.denominator != 1 or total < 1:
        raise DomainError(f"marginals must sum to a positive integer k, got {total}")
    k = int(total)

    prefix = [Fraction(0)]
    for y in ys:
        prefix.append(prefix[-1] + y)

    breaks = sorted({c - floor(c) for c in prefix[:-1]} | {Fraction(0)})
    atoms: Dict[frozenset, Fraction] = {}
    for idx, theta in enumerate(breaks):
        nxt = breaks[idx + 1] if idx + 1 < len(breaks) else Fraction(1)
        chosen = frozenset(labels[bisect_right(prefix, theta + i) - 1] for i in range(k))
        atoms[chosen] = atoms.get(chosen, Fraction(0)) + (nxt - theta)
    return HiderStrategy.from_atoms(atoms.items())


# -------------------------------------------------------------------
# Solver
# -------------------------------------------------------------------
@dataclass(frozen=True)
class OneUniformSolution:
    t_star: int
    value: Fraction
    universe: Tuple[int, ...]
    searcher_probs: Tuple[Fraction, ...]
    hider_marginals: Tuple[Fraction, ...]
    hider_mixture: HiderStrategy
    searcher: SearcherStrategy

    def to_solution(self, instance: GameInstance, limits: SolverLimits = DEFAULT_LIMITS) -> Solution:
        return make_solution(
            instance, self.value, self.searcher, self.hider_mixture, Method.ONE_UNIFORM, limits
        )


def _degenerate(instance: GameInstance, universe: Tuple[int, ...]) -> OneUniformSolution:
    # every positive searchable box can be trapped at once
    hg = instance.hypergraph
    first = hg.boxes[0] if hg.kind is HypergraphKind.ONE_UNIFORM else instance.order[0]
    cover = list(universe)
    for b in instance.boxes:
        if len(cover) == instance.k:
            break
        if b not in cover:
            cover.append(b)
    marg = tuple(Fraction(1) if b in cover else Fraction(0) for b in instance.boxes)
    return OneUniformSolution(
        t_star=len(universe),
        value=Fraction(0),
        universe=universe,
        searcher_probs=tuple(Fraction(1) if b == first else Fraction(0) for b in instance.boxes),
        hider_marginals=marg,
        hider_mixture=HiderStrategy.point(cover),
        searcher=SearcherStrategy.point([first]),
    )


def solve_one_uniform(instance: GameInstance) -> OneUniformSolution:
    universe = _search_universe(instance)
    k = instance.k
    if len(universe) <= k:
        logger.warning("Degenerate one-uniform instance: %d searchable boxes, k=%d", len(universe), k)
        return _degenerate(instance, universe)

    rs = [instance.reward(b) for b in universe]
    curve = _value_curve_sorted(rs, k)
    best_t, best_v = curve[0]
    for t, v in curve[1:]:
        if v > best_v:
            best_t, best_v = t, v

    top = universe[:best_t]
    lam = best_v / (best_t - k)
    assert best_v <= rs[best_t - 1], "V(t*) <= r_t* must hold at the maximiser"

    x = {b: lam / instance.reward(b) for b in top}
    y = {b: 1 - best_v / instance.reward(b) for b in top}

    labels = sorted(top)
    mixture = rotation_mixture([y[b] for b in labels], boxes=labels)
    logger.debug("one-uniform t*=%d value=%s", best_t, best_v)

    return OneUniformSolution(
        t_star=best_t,
        value=best_v,
        universe=universe,
        searcher_probs=tuple(x.get(b, Fraction(0)) for b in instance.boxes),
        hider_marginals=tuple(y.get(b, Fraction(0)) for b in instance.boxes),
        hider_mixture=mixture,
        searcher=SearcherStrategy.from_atoms(([b], x[b]) for b in labels),
    )


__all__ = [
    "lambda_of",
    "value_curve",
    "value_step_matches_reward",
    "rotation_mixture",
    "OneUniformSolution",
    "solve_one_uniform",
]
