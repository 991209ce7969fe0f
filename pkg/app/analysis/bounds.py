# app/analysis/bounds.py
"""
General bounds on the value for the complete hypergraph, and the
guarantee of a proportional ("partition-form") searcher mixture on an
arbitrary hypergraph.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, List, Sequence, Tuple

from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import CapacityError, DomainError, InvalidStrategyError, RegimeError
from app.core.game import GameInstance, SearcherStrategy, to_fraction
from app.core.subsets import Edge, to_mask

logger = logging.getLogger(__name__)


def _require_complete(instance: GameInstance) -> None:
    if not instance.is_complete:
        raise RegimeError("this bound holds on the complete hypergraph only")


def _limit_factor(k: int) -> Fraction:
    return Fraction(1, k + 1) * (1 - Fraction(1, k + 1)) ** k


def upper_bound(instance: GameInstance) -> Fraction:
    _require_complete(instance)
    return instance.total * _limit_factor(instance.k)


def lower_bound_independent(instance: GameInstance) -> Fraction:
    _require_complete(instance)
    R0 = instance.total
    if R0 == 0:
        return Fraction(0)
    top_k = sum(instance.sorted_rewards[: instance.k], Fraction(0))
    return R0 * _limit_factor(instance.k) * (1 - top_k / R0)


def independent_open_guarantee(instance: GameInstance, p: Any) -> Fraction:
    """
    Guarantee of opening every box independently with probability p:
    (1-p)^k * p * r(not H), smallest when H holds the k largest rewards.
    """
    _require_complete(instance)
    prob = to_fraction(p)
    if not 0 <= prob <= 1:
        raise DomainError(f"p must lie in [0, 1], got {prob}")
    rest = instance.total - sum(instance.sorted_rewards[: instance.k], Fraction(0))
    return (1 - prob) ** instance.k * prob * rest


def best_independent_probability(instance: GameInstance, grid: Iterable[Any]) -> Tuple[Fraction, Fraction]:
    """(p, guarantee) maximizing the independent-open guarantee over grid; ties keep the first."""
    best = None
    for p in grid:
        g = independent_open_guarantee(instance, p)
        if best is None or g > best[1]:
            best = (to_fraction(p), g)
    if best is None:
        raise DomainError("empty probability grid")
    return best


# -------------------------------------------------------------------
# Partition-form strategies
# -------------------------------------------------------------------
@dataclass(frozen=True)
class PartitionStrategySpec:
    edges: Tuple[Edge, ...]
    edge_rewards: Tuple[Fraction, ...]
    lam: Fraction
    m: int
    guaranteed: Fraction

    def strategy(self) -> SearcherStrategy:
        return SearcherStrategy.from_atoms(
            (e, self.lam / r) for e, r in zip(self.edges, self.edge_rewards)
        )


def _is_partition(instance: GameInstance, edges: Sequence[Edge]) -> bool:
    seen = set()
    for e in edges:
        if seen & e:
            return False
        seen |= e
    return seen == set(instance.boxes)


def min_trap_free(instance: GameInstance, edges: Sequence[Edge], limits: SolverLimits = DEFAULT_LIMITS) -> int:
    """min over trap sets H of the number of edges H misses."""
    count = instance.hider_count()
    if count > limits.sweep_max_pure:
        raise CapacityError("C(n,k) hider pure strategies", count, limits.sweep_max_pure)
    masks = [to_mask(e) for e in edges]
    best = len(masks)
    for h in instance.hider_sets():
        hm = to_mask(h)
        free = sum(1 for em in masks if not em & hm)
        if free < best:
            best = free
            if best == 0:
                break
    return best


def partition_bound(
    instance: GameInstance,
    edges: Iterable[Iterable[int]],
    limits: SolverLimits = DEFAULT_LIMITS,
) -> PartitionStrategySpec:
    es: List[Edge] = []
    for e in edges:
        fe = frozenset(e)
        if not instance.hypergraph.contains(fe, instance.n):
            raise InvalidStrategyError(f"{sorted(fe)} is not an edge of the hypergraph")
        if fe in es:
            raise InvalidStrategyError(f"duplicate edge {sorted(fe)}")
        es.append(fe)
    if not es:
        raise DomainError("need at least one edge")
    rewards = {e: instance.r(e) for e in es}
    if any(r <= 0 for r in rewards.values()):
        raise DomainError("every edge needs a positive total reward")
    lam = 1 / sum((1 / r for r in rewards.values()), Fraction(0))
    m = min_trap_free(instance, es, limits)
    if _is_partition(instance, es):
        assert m == max(len(es) - instance.k, 0), "a partition into t parts leaves t-k parts trap-free"
    return PartitionStrategySpec(
        edges=tuple(es),
        edge_rewards=tuple(rewards[e] for e in es),
        lam=lam,
        m=m,
        guaranteed=m * lam,
    )


__all__ = [
    "upper_bound",
    "lower_bound_independent",
    "independent_open_guarantee",
    "best_independent_probability",
    "PartitionStrategySpec",
    "min_trap_free",
    "partition_bound",
]
