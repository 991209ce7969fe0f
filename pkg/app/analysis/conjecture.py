# app/analysis/conjecture.py
"""
Evidence gathering for the proportional-support conjecture: some optimal
Searcher strategy puts probability lambda / r(S) on each edge of a support
and nothing elsewhere. For a desk-sized instance we compare the exact game
value with the best m * lambda over candidate supports.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import BoobyTrapError
from app.core.game import GameInstance, Method, Solution
from app.core.subsets import Edge, sorted_tuple, to_mask
from app.solvers.dispatch import applicable_method, solve_any
from app.solvers.lp_oracle import enumerate_pure_strategies, solve_oracle

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SupportScore:
    edges: Tuple[Edge, ...]
    lam: Fraction
    m: int

    @property
    def guaranteed(self) -> Fraction:
        return self.m * self.lam

    def key(self) -> Tuple[Fraction, Tuple]:
        # larger guarantee wins; ties go to the smaller, lexicographically first support
        return (-self.guaranteed, (len(self.edges), tuple(sorted(sorted_tuple(e) for e in self.edges))))


def better(a: Optional[SupportScore], b: Optional[SupportScore]) -> Optional[SupportScore]:
    """Associative, order-independent reduction over scores."""
    if a is None:
        return b
    if b is None:
        return a
    return a if a.key() <= b.key() else b


@dataclass(frozen=True)
class ConjectureReport:
    lp_value: Fraction
    best: Fraction
    gap: Fraction
    witness: Tuple[Edge, ...]
    supports_checked: int
    complete: bool
    candidate_sources: Tuple[str, ...] = field(default=())

    @property
    def verdict(self) -> str:
        if self.gap == 0:
            return "consistent"
        return "gap" if self.complete else "incomplete"


class _Scorer:
    """Exact lambda, vectorised trap-free counts."""

    def __init__(self, instance: GameInstance, edges: Sequence[Edge]) -> None:
        self.edges = list(edges)
        self.index = {e: i for i, e in enumerate(self.edges)}
        self.rewards = [instance.r(e) for e in self.edges]
        hider_masks = [to_mask(h) for h in instance.hider_sets()]
        self.free = np.array(
            [[0 if to_mask(e) & hm else 1 for hm in hider_masks] for e in self.edges],
            dtype=np.int32,
        )

    def score(self, idx: Sequence[int]) -> SupportScore:
        m = int(self.free[list(idx)].sum(axis=0).min())
        lam = 1 / sum((1 / self.rewards[i] for i in idx), Fraction(0))
        return SupportScore(edges=tuple(self.edges[i] for i in idx), lam=lam, m=m)

    def score_edges(self, edges: Iterable[Edge]) -> Optional[SupportScore]:
        idx = [self.index[e] for e in edges if e in self.index]
        return self.score(idx) if idx else None


def _candidate_supports(instance: GameInstance, oracle: Solution, limits: SolverLimits) -> List[Tuple[str, List[Edge]]]:
    out = [("lp", oracle.searcher.support())]
    method = applicable_method(instance)
    if method is not Method.LP_ORACLE:
        try:
            closed = solve_any(instance, method, limits)
            if closed.searcher is not None:
                out.append((method.value, closed.searcher.support()))
        except BoobyTrapError as e:
            logger.warning("closed form %s unavailable for candidates: %s", method.value, e)
    return out


def check_conjecture(
    instance: GameInstance,
    max_support: Optional[int] = None,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> ConjectureReport:
    max_support = limits.conjecture_max_support if max_support is None else max_support
    oracle = solve_oracle(instance, limits)
    lp_value = oracle.value

    rows, _ = enumerate_pure_strategies(instance, limits)
    edges = [e for e in rows if instance.r(e) > 0]
    if not edges:
        return ConjectureReport(lp_value, Fraction(0), lp_value, (), 0, True)
    scorer = _Scorer(instance, edges)

    best: Optional[SupportScore] = None
    sources = []
    for name, support in _candidate_supports(instance, oracle, limits):
        s = scorer.score_edges(support)
        if s is not None:
            sources.append(name)
            best = better(best, s)

    checked = 0
    complete = True
    if best is None or best.guaranteed < lp_value:
        budget = limits.conjecture_budget
        for size in range(1, min(max_support, len(edges)) + 1):
            for idx in combinations(range(len(edges)), size):
                if checked >= budget:
                    complete = False
                    break
                checked += 1
                best = better(best, scorer.score(idx))
                if best.guaranteed == lp_value:
                    break
            if not complete or best.guaranteed == lp_value:
                break
        if not complete:
            logger.warning("Conjecture enumeration stopped after %d supports (budget)", checked)

    assert best.guaranteed <= lp_value, "a proportional support cannot beat the game value"
    return ConjectureReport(
        lp_value=lp_value,
        best=best.guaranteed,
        gap=lp_value - best.guaranteed,
        witness=best.edges,
        supports_checked=checked,
        complete=complete,
        candidate_sources=tuple(sources),
    )


__all__ = ["SupportScore", "better", "ConjectureReport", "check_conjecture"]
