# app/solvers/k1.py
"""
Complete hypergraph with a single booby trap.

The Searcher splits the boxes into S* and its complement so that
|r(S*) - r(S*c)| is minimal and mixes the two halves; the Hider traps
box i with probability r_i / R0. Finding S* is number partitioning,
solved exactly with the complete Karmarkar-Karp tree search.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import CapacityError, DomainError, RegimeError
from app.core.game import (
    GameInstance,
    HiderStrategy,
    Method,
    SearcherStrategy,
    Solution,
    make_solution,
    to_fraction,
)
from app.core.subsets import Edge

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionResult:
    s_star: Edge
    diff: Fraction
    r_s: Fraction
    r_complement: Fraction
    canonical: bool = True


def _positive_order(rewards: Sequence[Fraction]) -> List[int]:
    """0-based positions of positive rewards, reward desc then index asc."""
    idx = [i for i, r in enumerate(rewards) if r > 0]
    return sorted(idx, key=lambda i: (-rewards[i], i))


# -------------------------------------------------------------------
# Complete Karmarkar-Karp
# -------------------------------------------------------------------
class _CKK:
    """Works on the values scaled to integers by the lcm of their denominators."""

    def __init__(self, values: Sequence[Fraction]) -> None:
        self.scale = 1
        for v in values:
            self.scale = lcm(self.scale, v.denominator)
        self.values = [int(v * self.scale) for v in values]
        # no partition can beat the parity of the total
        self.floor = sum(self.values) % 2
        self.best: Optional[int] = None
        self.best_left = 0
        self.nodes = 0

    def run(self) -> Tuple[Fraction, int]:
        # (difference, left mask, right mask); left - right = difference
        items = [(v, 1 << i, 0) for i, v in enumerate(self.values)]
        items.sort(key=lambda t: t[0], reverse=True)
        self._search(items)
        logger.debug("CKK explored %d nodes, best diff %s", self.nodes, self.best)
        return Fraction(self.best, self.scale), self.best_left

    def _done(self) -> bool:
        return self.best is not None and self.best <= self.floor

    def _leaf(self, diff: int, left: int) -> None:
        if self.best is None or diff < self.best:
            self.best = diff
            self.best_left = left

    def _search(self, items: List[Tuple[int, int, int]]) -> None:
        self.nodes += 1
        head_v, head_l, _ = items[0]
        rest = sum(v for v, _, _ in items[1:])
        if self.best is not None and head_v - rest >= self.best:
            return
        if head_v >= rest:
            # every other item goes against the head
            left = head_l
            for _, l, r in items[1:]:
                left |= r
            self._leaf(head_v - rest, left)
            return
        (a, al, ar), (b, bl, br) = items[0], items[1]
        others = items[2:]
        for merged in ((a - b, al | br, ar | bl), (a + b, al | bl, ar | br)):
            nxt = others + [merged]
            nxt.sort(key=lambda t: t[0], reverse=True)
            self._search(nxt)
            if self._done():
                return


def _canonical_subset(values: Sequence[int], diff: int) -> Tuple[int, ...]:
    """
    Lexicographically smallest position tuple containing position 0 whose sum
    is (R0 - diff)/2 or (R0 + diff)/2. Positions follow the sorted order.
    """
    total = sum(values)
    # diff has the parity of total
    lo, hi = (total - diff) // 2, (total + diff) // 2
    m = len(values)
    suffix = [0] * (m + 1)
    for j in range(m - 1, -1, -1):
        suffix[j] = suffix[j + 1] + values[j]
    dead: Set[Tuple[int, int]] = set()

    def find(start: int, c: int, chosen: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
        if c == lo or c == hi:
            return chosen
        if (start, c) in dead:
            return None
        for j in range(start, m):
            nc = c + values[j]
            if nc + suffix[j + 1] < lo:
                break
            if nc > hi:
                continue
            found = find(j + 1, nc, chosen + (j,))
            if found is not None:
                return found
        dead.add((start, c))
        return None

    found = find(1, values[0], (0,))
    assert found is not None, "CKK optimum must be reachable from the largest box"
    return found


def best_partition(rewards: Sequence[Any], limits: SolverLimits = DEFAULT_LIMITS) -> PartitionResult:
    rs = [to_fraction(r) for r in rewards]
    n = len(rs)
    if n < 2:
        raise DomainError("partitioning needs at least two boxes")
    if any(r < 0 for r in rs):
        raise DomainError("rewards must be nonnegative")
    if n > limits.partition_max_n:
        raise CapacityError("boxes to partition", n, limits.partition_max_n)

    order = _positive_order(rs)
    total = sum(rs, Fraction(0))
    if not order:
        return PartitionResult(frozenset({1}), Fraction(0), Fraction(0), Fraction(0))

    values = [rs[i] for i in order]
    ckk = _CKK(values)
    diff, _ = ckk.run()
    positions = _canonical_subset(ckk.values, ckk.best)
    s_star = frozenset(order[p] + 1 for p in positions)
    r_s = sum((rs[b - 1] for b in s_star), Fraction(0))
    return PartitionResult(s_star=s_star, diff=diff, r_s=r_s, r_complement=total - r_s)


def brute_force_partition(rewards: Sequence[Any]) -> PartitionResult:
    """Exhaustive reference with the same tie-break, for small n."""
    rs = [to_fraction(r) for r in rewards]
    order = _positive_order(rs)
    total = sum(rs, Fraction(0))
    if not order:
        return PartitionResult(frozenset({1}), Fraction(0), Fraction(0), Fraction(0))
    best: Optional[Tuple[Fraction, Tuple[int, ...]]] = None
    m = len(order)
    for size in range(0, m):
        for extra in combinations(range(1, m), size):
            pos = (0,) + extra
            r_s = sum((rs[order[p]] for p in pos), Fraction(0))
            d = abs(2 * r_s - total)
            if best is None or (d, pos) < best:
                best = (d, pos)
    d, pos = best
    s_star = frozenset(order[p] + 1 for p in pos)
    r_s = sum((rs[b - 1] for b in s_star), Fraction(0))
    return PartitionResult(s_star=s_star, diff=d, r_s=r_s, r_complement=total - r_s)


# -------------------------------------------------------------------
# Solver
# -------------------------------------------------------------------
def quadratic_identity_check(instance: GameInstance, S: Any) -> Fraction:
    s = frozenset(S)
    r_s = instance.r(s)
    r_c = instance.total - r_s
    product = r_s * r_c
    assert product == (instance.total ** 2 - (r_s - r_c) ** 2) / 4
    return product


def equal_split_lower_bound(instance: GameInstance) -> Fraction:
    """R0/(k+1)^2: pick one of k+1 parts uniformly; at least one part is trap-free."""
    return instance.total / (instance.k + 1) ** 2


def solve_k1(instance: GameInstance, limits: SolverLimits = DEFAULT_LIMITS) -> Solution:
    if instance.k != 1 or not instance.is_complete:
        raise RegimeError("k1 solver needs k=1 on the complete hypergraph")

    R0 = instance.total
    if R0 == 0:
        logger.warning("All rewards are zero; value 0 with a degenerate solution")
        return make_solution(
            instance,
            Fraction(0),
            SearcherStrategy.point([1]),
            HiderStrategy.point([1]),
            Method.K_EQUALS_1,
            limits,
        )

    part = best_partition(instance.rewards, limits)
    s_star = part.s_star
    s_bar = frozenset(instance.boxes) - s_star
    value = part.r_s * part.r_complement / R0

    atoms: Dict[Edge, Fraction] = {}
    if part.r_complement:
        atoms[s_star] = part.r_complement / R0
    if part.r_s:
        atoms[s_bar] = part.r_s / R0
    searcher = SearcherStrategy.from_atoms(atoms.items())
    hider = HiderStrategy.from_atoms(
        ([b], instance.reward(b) / R0) for b in instance.boxes if instance.reward(b) > 0
    )
    logger.debug("k1 S*=%s diff=%s value=%s", sorted(s_star), part.diff, value)
    return make_solution(instance, value, searcher, hider, Method.K_EQUALS_1, limits)


__all__ = [
    "PartitionResult",
    "best_partition",
    "brute_force_partition",
    "quadratic_identity_check",
    "equal_split_lower_bound",
    "solve_k1",
]
