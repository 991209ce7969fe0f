# app/core/game.py
"""
Problem representation for the booby-trap search game.

A Searcher opens a hyperedge S of boxes and collects r(S) unless one of the
k booby-trapped boxes H lies in S. Boxes are labelled 1..n in the user's
original order; solvers work on the descending-reward view exposed by
GameInstance.order and translate back.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple

from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import (
    CapacityError,
    InvalidInstanceError,
    InvalidStrategyError,
)
from app.core.subsets import Edge, count_subsets_upto, k_subsets, subsets_upto, to_mask

logger = logging.getLogger(__name__)


def to_fraction(value: Any) -> Fraction:
    """Exact conversion; floats go through their shortest repr (0.1 -> 1/10)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rewards")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


# -------------------------------------------------------------------
# Hypergraph
# -------------------------------------------------------------------
class HypergraphKind(str, Enum):
    COMPLETE = "complete"
    ONE_UNIFORM = "one_uniform"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class Hypergraph:
    kind: HypergraphKind
    boxes: Tuple[int, ...] = ()
    edges: Tuple[Edge, ...] = ()

    @classmethod
    def complete(cls) -> "Hypergraph":
        return cls(HypergraphKind.COMPLETE)

    @classmethod
    def one_uniform(cls, boxes: Iterable[int]) -> "Hypergraph":
        allowed = tuple(sorted(set(int(b) for b in boxes)))
        if not allowed:
            raise InvalidInstanceError("one-uniform hypergraph needs a nonempty box set")
        return cls(HypergraphKind.ONE_UNIFORM, boxes=allowed)

    @classmethod
    def explicit(cls, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        seen: List[Edge] = []
        for e in edges:
            fe = frozenset(int(b) for b in e)
            if not fe:
                raise InvalidInstanceError("hyperedges must be nonempty")
            if fe in seen:
                raise InvalidInstanceError(f"duplicate hyperedge {sorted(fe)}")
            seen.append(fe)
        if not seen:
            raise InvalidInstanceError("explicit hypergraph needs at least one edge")
        return cls(HypergraphKind.EXPLICIT, edges=tuple(seen))

    def contains(self, edge: Edge, n: int) -> bool:
        if not edge or any(b < 1 or b > n for b in edge):
            return False
        if self.kind is HypergraphKind.COMPLETE:
            return True
        if self.kind is HypergraphKind.ONE_UNIFORM:
            return len(edge) == 1 and next(iter(edge)) in self.boxes
        return edge in self.edges

    def edge_count(self, n: int, k: int) -> int:
        """Number of viable searcher pure strategies (complete: sizes 1..n-k)."""
        if self.kind is HypergraphKind.COMPLETE:
            return count_subsets_upto(n, n - k)
        if self.kind is HypergraphKind.ONE_UNIFORM:
            return len(self.boxes)
        return len(self.edges)

    def viable_edges(self, n: int, k: int) -> Iterator[Edge]:
        if self.kind is HypergraphKind.COMPLETE:
            yield from subsets_upto(range(1, n + 1), n - k)
        elif self.kind is HypergraphKind.ONE_UNIFORM:
            for b in self.boxes:
                yield frozenset((b,))
        else:
            yield from self.edges


# -------------------------------------------------------------------
# Instance
# -------------------------------------------------------------------
@dataclass(frozen=True)
class GameInstance:
    rewards: Tuple[Fraction, ...]
    k: int
    hypergraph: Hypergraph
    order: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        rewards = tuple(to_fraction(r) for r in self.rewards)
        object.__setattr__(self, "rewards", rewards)
        n = len(rewards)
        if n < 2:
            raise InvalidInstanceError("need at least two boxes (1 <= k <= n-1)")
        if not isinstance(self.k, int) or not 1 <= self.k <= n - 1:
            raise InvalidInstanceError(f"k must satisfy 1 <= k <= n-1 = {n - 1}, got {self.k}")
        for i, r in enumerate(rewards, start=1):
            if r < 0:
                raise InvalidInstanceError(f"reward of box {i} is negative: {r}")
        hg = self.hypergraph
        if hg.kind is HypergraphKind.ONE_UNIFORM:
            bad = [b for b in hg.boxes if b < 1 or b > n]
        elif hg.kind is HypergraphKind.EXPLICIT:
            bad = [b for e in hg.edges for b in e if b < 1 or b > n]
        else:
            bad = []
        if bad:
            raise InvalidInstanceError(f"box indices out of range 1..{n}: {sorted(set(bad))}")
        # stable: reward desc, original index asc
        order = tuple(sorted(range(1, n + 1), key=lambda b: (-rewards[b - 1], b)))
        object.__setattr__(self, "order", order)

    @classmethod
    def create(
        cls,
        rewards: Iterable[Any],
        k: int,
        hypergraph: Optional[Hypergraph] = None,
    ) -> "GameInstance":
        return cls(
            rewards=tuple(to_fraction(r) for r in rewards),
            k=k,
            hypergraph=hypergraph or Hypergraph.complete(),
        )

    @property
    def n(self) -> int:
        return len(self.rewards)

    @property
    def boxes(self) -> range:
        return range(1, self.n + 1)

    @property
    def total(self) -> Fraction:
        return sum(self.rewards, Fraction(0))

    @property
    def sorted_rewards(self) -> Tuple[Fraction, ...]:
        return tuple(self.rewards[b - 1] for b in self.order)

    def reward(self, box: int) -> Fraction:
        return self.rewards[box - 1]

    def r(self, boxes: Iterable[int]) -> Fraction:
        return sum((self.rewards[b - 1] for b in boxes), Fraction(0))

    def hider_sets(self) -> Iterator[Edge]:
        return k_subsets(tuple(self.boxes), self.k)

    def hider_count(self) -> int:
        return comb(self.n, self.k)

    def scaled(self, c: Fraction) -> "GameInstance":
        return GameInstance(tuple(r * c for r in self.rewards), self.k, self.hypergraph)

    @property
    def is_complete(self) -> bool:
        return self.hypergraph.kind is HypergraphKind.COMPLETE


# -------------------------------------------------------------------
# Mixed strategies
# -------------------------------------------------------------------
def _normalize_atoms(
    atoms: Iterable[Tuple[Iterable[int], Any]],
    what: str,
) -> Tuple[Tuple[Edge, Fraction], ...]:
    out: Dict[Edge, Fraction] = {}
    for boxes, prob in atoms:
        e = frozenset(int(b) for b in boxes)
        p = to_fraction(prob)
        if p < 0:
            raise InvalidStrategyError(f"{what}: negative probability {p} on {sorted(e)}")
        if e in out:
            raise InvalidStrategyError(f"{what}: duplicate atom {sorted(e)}")
        out[e] = p
    total = sum(out.values(), Fraction(0))
    if total != 1:
        raise InvalidStrategyError(f"{what}: probabilities sum to {total}, not 1")
    return tuple(out.items())


@dataclass(frozen=True)
class _MixedStrategy:
    atoms: Tuple[Tuple[Edge, Fraction], ...]

    def probability(self, boxes: Iterable[int]) -> Fraction:
        key = frozenset(boxes)
        for e, p in self.atoms:
            if e == key:
                return p
        return Fraction(0)

    def support(self) -> List[Edge]:
        return [e for e, p in self.atoms if p > 0]

    def as_dict(self) -> Dict[Edge, Fraction]:
        return dict(self.atoms)


@dataclass(frozen=True)
class SearcherStrategy(_MixedStrategy):
    @classmethod
    def from_atoms(cls, atoms: Iterable[Tuple[Iterable[int], Any]]) -> "SearcherStrategy":
        return cls(_normalize_atoms(atoms, "searcher strategy"))

    @classmethod
    def point(cls, boxes: Iterable[int]) -> "SearcherStrategy":
        return cls.from_atoms([(boxes, 1)])


@dataclass(frozen=True)
class HiderStrategy(_MixedStrategy):
    @classmethod
    def from_atoms(cls, atoms: Iterable[Tuple[Iterable[int], Any]]) -> "HiderStrategy":
        return cls(_normalize_atoms(atoms, "hider strategy"))

    @classmethod
    def point(cls, boxes: Iterable[int]) -> "HiderStrategy":
        return cls.from_atoms([(boxes, 1)])


def validate_searcher(instance: GameInstance, p: SearcherStrategy) -> None:
    for e, _ in p.atoms:
        if not instance.hypergraph.contains(e, instance.n):
            raise InvalidStrategyError(f"{sorted(e)} is not an edge of the hypergraph")


def validate_hider(instance: GameInstance, q: HiderStrategy) -> None:
    for h, _ in q.atoms:
        _check_trap_set(instance, h)


def _check_trap_set(instance: GameInstance, h: Edge) -> None:
    if len(h) != instance.k:
        raise InvalidStrategyError(f"trap set {sorted(h)} has {len(h)} boxes, expected k={instance.k}")
    if any(b < 1 or b > instance.n for b in h):
        raise InvalidStrategyError(f"trap set {sorted(h)} names boxes outside 1..{instance.n}")


def hider_marginals(n: int, q: HiderStrategy) -> Tuple[Fraction, ...]:
    """Per-box trap probabilities, boxes 1..n."""
    y = [Fraction(0)] * n
    for h, p in q.atoms:
        for b in h:
            y[b - 1] += p
    return tuple(y)


# -------------------------------------------------------------------
# Payoffs
# -------------------------------------------------------------------
def payoff(instance: GameInstance, S: Iterable[int], H: Iterable[int]) -> Fraction:
    s, h = frozenset(S), frozenset(H)
    if not instance.hypergraph.contains(s, instance.n):
        raise InvalidStrategyError(f"{sorted(s)} is not an edge of the hypergraph")
    _check_trap_set(instance, h)
    if s & h:
        return Fraction(0)
    return instance.r(s)


def _payoff_against(s_mask: int, r_s: Fraction, q_masks) -> Fraction:
    free = Fraction(0)
    for h_mask, prob in q_masks:
        if not s_mask & h_mask:
            free += prob
    return r_s * free


def expected_payoff(instance: GameInstance, p: SearcherStrategy, q: HiderStrategy) -> Fraction:
    validate_searcher(instance, p)
    validate_hider(instance, q)
    q_masks = [(to_mask(h), prob) for h, prob in q.atoms]
    total = Fraction(0)
    for s, prob in p.atoms:
        if prob:
            total += prob * _payoff_against(to_mask(s), instance.r(s), q_masks)
    return total


def _check_sweep_cap(bound: str, value: int, limits: SolverLimits) -> None:
    if value > limits.sweep_max_pure:
        raise CapacityError(bound, value, limits.sweep_max_pure)


def searcher_payoffs(
    instance: GameInstance,
    p: SearcherStrategy,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> List[Tuple[Edge, Fraction]]:
    """R(p, H) for every hider pure strategy H."""
    validate_searcher(instance, p)
    _check_sweep_cap("C(n,k) hider pure strategies", instance.hider_count(), limits)
    p_masks = [(to_mask(s), instance.r(s) * prob) for s, prob in p.atoms if prob]
    out: List[Tuple[Edge, Fraction]] = []
    for h in instance.hider_sets():
        hm = to_mask(h)
        out.append((h, sum((w for sm, w in p_masks if not sm & hm), Fraction(0))))
    return out


def hider_payoffs(
    instance: GameInstance,
    q: HiderStrategy,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> List[Tuple[Edge, Fraction]]:
    """R(S, q) for every viable searcher pure strategy S."""
    validate_hider(instance, q)
    _check_sweep_cap(
        "searcher pure strategies",
        instance.hypergraph.edge_count(instance.n, instance.k),
        limits,
    )
    q_masks = [(to_mask(h), prob) for h, prob in q.atoms if prob]
    return [
        (s, _payoff_against(to_mask(s), instance.r(s), q_masks))
        for s in instance.hypergraph.viable_edges(instance.n, instance.k)
    ]


def guarantee_of_searcher(
    instance: GameInstance,
    p: SearcherStrategy,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> Fraction:
    return min(v for _, v in searcher_payoffs(instance, p, limits))


def guarantee_of_hider(
    instance: GameInstance,
    q: HiderStrategy,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> Fraction:
    return max(v for _, v in hider_payoffs(instance, q, limits))


# -------------------------------------------------------------------
# Solution
# -------------------------------------------------------------------
class Method(str, Enum):
    ONE_UNIFORM = "one_uniform"
    EQUAL_REWARDS = "equal"
    K_EQUALS_1 = "k1"
    N4K2 = "n4k2"
    LP_ORACLE = "lp"


@dataclass(frozen=True)
class Certificates:
    searcher_payoffs: Tuple[Tuple[Edge, Fraction], ...]
    hider_payoffs: Tuple[Tuple[Edge, Fraction], ...]

    @property
    def searcher_guarantee(self) -> Fraction:
        return min(v for _, v in self.searcher_payoffs)

    @property
    def hider_guarantee(self) -> Fraction:
        return max(v for _, v in self.hider_payoffs)


def certify(
    instance: GameInstance,
    p: SearcherStrategy,
    q: HiderStrategy,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> Optional[Certificates]:
    try:
        return Certificates(
            searcher_payoffs=tuple(searcher_payoffs(instance, p, limits)),
            hider_payoffs=tuple(hider_payoffs(instance, q, limits)),
        )
    except CapacityError as e:
        logger.warning("Skipping certificate sweep: %s", e)
        return None


@dataclass(frozen=True)
class Solution:
    """
    searcher/hider are None when a closed form is too large to list; the
    *_family fields then describe the mixture instead.
    """

    value: Fraction
    searcher: Optional[SearcherStrategy]
    hider: Optional[HiderStrategy]
    method: Method
    certificates: Optional[Certificates] = None
    searcher_family: Optional[str] = None
    hider_family: Optional[str] = None

    @property
    def materialized(self) -> bool:
        return self.searcher is not None and self.hider is not None

    @property
    def certified(self) -> bool:
        c = self.certificates
        return c is not None and c.searcher_guarantee == self.value == c.hider_guarantee


def make_solution(
    instance: GameInstance,
    value: Fraction,
    searcher: SearcherStrategy,
    hider: HiderStrategy,
    method: Method,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> Solution:
    validate_searcher(instance, searcher)
    validate_hider(instance, hider)
    return Solution(
        value=value,
        searcher=searcher,
        hider=hider,
        method=method,
        certificates=certify(instance, searcher, hider, limits),
    )


__all__ = [
    "Edge",
    "to_fraction",
    "HypergraphKind",
    "Hypergraph",
    "GameInstance",
    "SearcherStrategy",
    "HiderStrategy",
    "validate_searcher",
    "validate_hider",
    "hider_marginals",
    "payoff",
    "expected_payoff",
    "searcher_payoffs",
    "hider_payoffs",
    "guarantee_of_searcher",
    "guarantee_of_hider",
    "Method",
    "Certificates",
    "certify",
    "Solution",
    "make_solution",
]
