# app/solvers/equal_rewards.py
"""
Complete hypergraph, all rewards equal.

Opening m random boxes against any fixed trap set earns
F(m) = C(n-m, k) * m / C(n, k) (times the common reward); F is unimodal
with peak at m* = ceil((n-k)/(k+1)). The Hider traps a uniformly random
k-subset.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from math import ceil, comb, prod
from typing import Any, Iterator, Tuple

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


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def F(n: int, k: int, m: int, reward: Any = 1) -> Fraction:
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    if m > n:
        return Fraction(0)
    # comb(n - m, k) is 0 once n - m < k, i.e. every m-set is hit
    return Fraction(comb(n - m, k) * m, comb(n, k)) * to_fraction(reward)


def F_float(n: int, k: int, m: int) -> float:
    """Floating evaluation via the success-probability product, for large n."""
    if m > n - k:
        return 0.0
    p = 1.0
    for i in range(k):
        p *= 1.0 - m / (n - i)
    return p * m


def optimal_m(n: int, k: int) -> int:
    return _ceil_div(n - k, k + 1)


def success_probability(n: int, k: int, m: int) -> Fraction:
    """P(no trap among m random boxes) as prod_{i<k} (1 - m/(n-i))."""
    return prod((1 - Fraction(m, n - i) for i in range(k)), start=Fraction(1))


def success_probability_bounds(n: int, k: int) -> Tuple[float, float, float]:
    """(lower, value, upper) for the success probability at m*; lower is strict."""
    m = optimal_m(n, k)
    lower = upper = value = 1.0
    for i in range(k):
        lower *= 1.0 - ((n + 1) / (n - i)) / (k + 1)
        value *= 1.0 - m / (n - i)
        upper *= 1.0 - ((n - k) / (n - i)) / (k + 1)
    return lower, value, upper


def asymptotic_ratio_fixed_theta(theta: Any) -> Tuple[int, Fraction]:
    """k = theta * n with n -> infinity: (m*, lim F(m*))."""
    th = to_fraction(theta)
    if not 0 < th <= Fraction(1, 2):
        raise DomainError(f"theta must lie in (0, 1/2], got {th}")
    m = ceil((1 - th) / th)
    return m, m * (1 - th) ** m


def asymptotic_ratio_fixed_k(k: int) -> Fraction:
    """lim U(n, k) / n for fixed k."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    return Fraction(1, k + 1) * (1 - Fraction(1, k + 1)) ** k


# -------------------------------------------------------------------
# Uniform families
# -------------------------------------------------------------------
@dataclass(frozen=True)
class UniformFamily:
    """Uniform distribution over all `size`-subsets of boxes 1..n."""

    n: int
    size: int

    @property
    def count(self) -> int:
        return comb(self.n, self.size)

    @property
    def probability(self) -> Fraction:
        return Fraction(1, self.count)

    def iter_sets(self) -> Iterator[Edge]:
        for c in combinations(range(1, self.n + 1), self.size):
            yield frozenset(c)

    def _atoms(self, cap: int):
        if self.count > cap:
            raise CapacityError(f"C({self.n},{self.size})", self.count, cap)
        p = self.probability
        return [(s, p) for s in self.iter_sets()]

    def searcher(self, limits: SolverLimits = DEFAULT_LIMITS) -> SearcherStrategy:
        return SearcherStrategy.from_atoms(self._atoms(limits.uniform_materialize_cap))

    def hider(self, limits: SolverLimits = DEFAULT_LIMITS) -> HiderStrategy:
        return HiderStrategy.from_atoms(self._atoms(limits.uniform_materialize_cap))

    def describe(self) -> str:
        return f"uniform over [{self.n}]^({self.size})"


@dataclass(frozen=True)
class EqualRewardsSolution:
    n: int
    k: int
    reward: Fraction
    m_star: int
    value: Fraction
    searcher: UniformFamily
    hider: UniformFamily

    def to_solution(self, instance: GameInstance, limits: SolverLimits = DEFAULT_LIMITS) -> Solution:
        families = {
            "searcher_family": self.searcher.describe(),
            "hider_family": self.hider.describe(),
        }
        try:
            searcher = self.searcher.searcher(limits)
            hider = self.hider.hider(limits)
        except CapacityError as e:
            logger.warning("Equal-rewards strategies left symbolic: %s", e)
            return Solution(
                value=self.value,
                searcher=None,
                hider=None,
                method=Method.EQUAL_REWARDS,
                **families,
            )
        solution = make_solution(instance, self.value, searcher, hider, Method.EQUAL_REWARDS, limits)
        return replace(solution, **families)


def solve_equal(n: int, k: int, reward: Any = 1) -> EqualRewardsSolution:
    r = to_fraction(reward)
    if not 1 <= k <= n - 1:
        raise DomainError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    if r <= 0:
        raise DomainError(f"common reward must be positive, got {r}")
    m = optimal_m(n, k)
    value = F(n, k, m, r)
    logger.debug("equal rewards n=%d k=%d m*=%d value=%s", n, k, m, value)
    return EqualRewardsSolution(
        n=n,
        k=k,
        reward=r,
        m_star=m,
        value=value,
        searcher=UniformFamily(n, m),
        hider=UniformFamily(n, k),
    )


def solve_equal_instance(instance: GameInstance) -> EqualRewardsSolution:
    if not instance.is_complete:
        raise RegimeError("equal-rewards solver needs the complete hypergraph")
    if len(set(instance.rewards)) != 1:
        raise RegimeError("equal-rewards solver needs identical rewards")
    return solve_equal(instance.n, instance.k, instance.rewards[0])


__all__ = [
    "F",
    "F_float",
    "optimal_m",
    "success_probability",
    "success_probability_bounds",
    "asymptotic_ratio_fixed_theta",
    "asymptotic_ratio_fixed_k",
    "UniformFamily",
    "EqualRewardsSolution",
    "solve_equal",
    "solve_equal_instance",
]
