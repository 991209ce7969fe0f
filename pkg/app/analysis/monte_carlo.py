# app/analysis/monte_carlo.py
"""
Sampling-based validation of mixed strategies.

Trials are cut into fixed-size blocks. Block b draws from PCG64 seeded with
SeedSequence([seed, b]) and reports (count, sum, sum of squares); blocks are
merged in index order, so a report does not depend on how many workers ran.
Marginal estimates draw from their own stream, SeedSequence([seed, b, 1]).
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from app.config import DEFAULT_LIMITS, FLOAT_TOLERANCE, SolverLimits
from app.core.errors import DomainError
from app.core.game import (
    GameInstance,
    HiderStrategy,
    SearcherStrategy,
    expected_payoff,
    validate_hider,
)
from app.core.subsets import to_mask

logger = logging.getLogger(__name__)

ALGORITHM = "PCG64"
MARGINALS_STREAM = 1


@dataclass(frozen=True)
class SimulationReport:
    trials: int
    mean: float
    stderr: float
    exact: Fraction
    z_score: float
    seed: int
    algorithm: str = ALGORITHM

    @property
    def passed(self) -> bool:
        slack = FLOAT_TOLERANCE * max(1.0, abs(float(self.exact)))
        return abs(self.mean - float(self.exact)) <= 3 * self.stderr + slack


def _generator(seed: int, block: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block, *stream])))


def _cdf(probs: Sequence[Fraction]) -> np.ndarray:
    # exact weights go to float once
    cdf = np.cumsum(np.array([float(p) for p in probs], dtype=np.float64))
    cdf[-1] = 1.0
    return cdf


def _draw(rng: np.random.Generator, cdf: np.ndarray, size: int) -> np.ndarray:
    idx = np.searchsorted(cdf, rng.random(size), side="right")
    return np.minimum(idx, len(cdf) - 1)


def _blocks(trials: int, block_size: int) -> List[Tuple[int, int]]:
    out = []
    start, b = 0, 0
    while start < trials:
        size = min(block_size, trials - start)
        out.append((b, size))
        start += size
        b += 1
    return out


def _check_run(trials: int, seed: int) -> None:
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if seed < 0:
        raise DomainError(f"seed must be nonnegative, got {seed}")


def simulate(
    instance: GameInstance,
    p: SearcherStrategy,
    q: HiderStrategy,
    trials: int,
    seed: int,
    workers: int = 1,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> SimulationReport:
    _check_run(trials, seed)
    exact = expected_payoff(instance, p, q)  # validates both strategies

    s_atoms = [(e, pr) for e, pr in p.atoms if pr > 0]
    h_atoms = [(h, pr) for h, pr in q.atoms if pr > 0]
    s_cdf = _cdf([pr for _, pr in s_atoms])
    h_cdf = _cdf([pr for _, pr in h_atoms])
    h_masks = [to_mask(h) for h, _ in h_atoms]
    table = np.array(
        [[0.0 if to_mask(s) & hm else float(instance.r(s)) for hm in h_masks] for s, _ in s_atoms],
        dtype=np.float64,
    )

    def run_block(block: Tuple[int, int]) -> Tuple[int, float, float]:
        b, size = block
        rng = _generator(seed, b)
        si = _draw(rng, s_cdf, size)
        hi = _draw(rng, h_cdf, size)
        x = table[si, hi]
        return size, float(x.sum()), float(np.dot(x, x))

    blocks = _blocks(trials, limits.mc_block_size)
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(run_block, blocks))
    else:
        stats = [run_block(b) for b in blocks]

    count, total, total_sq = 0, 0.0, 0.0
    for c, s, s2 in stats:
        count += c
        total += s
        total_sq += s2

    mean = total / count
    if count > 1:
        var = max((total_sq - total * total / count) / (count - 1), 0.0)
    else:
        var = 0.0
    stderr = math.sqrt(var) / math.sqrt(count)
    diff = mean - float(exact)
    z = diff / stderr if stderr > 0 else 0.0
    logger.info("simulated %d trials (seed=%d): mean=%.6f exact=%s z=%.3f", count, seed, mean, exact, z)
    return SimulationReport(trials=count, mean=mean, stderr=stderr, exact=exact, z_score=z, seed=seed)


def empirical_marginals(
    instance: GameInstance,
    hider: HiderStrategy,
    trials: int,
    seed: int,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> Tuple[float, ...]:
    """Per-box trap frequencies for boxes 1..n."""
    _check_run(trials, seed)
    validate_hider(instance, hider)
    atoms = [(h, pr) for h, pr in hider.atoms if pr > 0]
    cdf = _cdf([pr for _, pr in atoms])

    counts = np.zeros(len(atoms), dtype=np.int64)
    for b, size in _blocks(trials, limits.mc_block_size):
        counts += np.bincount(_draw(_generator(seed, b, MARGINALS_STREAM), cdf, size), minlength=len(atoms))

    freq = np.zeros(instance.n, dtype=np.float64)
    for (h, _), c in zip(atoms, counts):
        for box in h:
            freq[box - 1] += c
    return tuple(float(v) for v in freq / trials)


__all__ = ["ALGORITHM", "MARGINALS_STREAM", "SimulationReport", "simulate", "empirical_marginals"]
