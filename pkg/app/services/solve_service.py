# app/services/solve_service.py
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any, Dict, Optional

from app.analysis.bounds import best_independent_probability, lower_bound_independent, upper_bound
from app.analysis.conjecture import check_conjecture
from app.analysis.monte_carlo import empirical_marginals, simulate
from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import CapacityError, RegimeError
from app.core.game import GameInstance, Method, hider_marginals
from app.ops.instance_io import InstanceParseError, format_fraction, solution_to_result
from app.solvers.dispatch import solve_any
from app.solvers.k1 import equal_split_lower_bound

logger = logging.getLogger(__name__)

METHOD_NAMES: Dict[str, Optional[Method]] = {
    "auto": None,
    "one-uniform": Method.ONE_UNIFORM,
    "one_uniform": Method.ONE_UNIFORM,
    "equal": Method.EQUAL_REWARDS,
    "k1": Method.K_EQUALS_1,
    "n4k2": Method.N4K2,
    "lp": Method.LP_ORACLE,
}

INDEPENDENT_GRID = tuple(Fraction(i, 10) for i in range(1, 10))


def parse_method(name: Optional[str]) -> Optional[Method]:
    key = (name or "auto").strip().lower()
    if key not in METHOD_NAMES:
        raise InstanceParseError("method", f"unknown method {name!r}; expected one of {sorted(METHOD_NAMES)}")
    return METHOD_NAMES[key]


def _frac(x: Fraction) -> Dict[str, Any]:
    return {"exact": format_fraction(x), "float": float(x)}


def solve(instance: GameInstance, method: Optional[str] = None, limits: SolverLimits = DEFAULT_LIMITS) -> Dict[str, Any]:
    solution = solve_any(instance, parse_method(method), limits)
    return solution_to_result(instance, solution)


def bounds(instance: GameInstance, limits: SolverLimits = DEFAULT_LIMITS) -> Dict[str, Any]:
    p, guarantee = best_independent_probability(instance, INDEPENDENT_GRID)
    out: Dict[str, Any] = {
        "lower": _frac(lower_bound_independent(instance)),
        "upper": _frac(upper_bound(instance)),
        "equal_split_lower": _frac(equal_split_lower_bound(instance)),
        "independent_open": {"p": format_fraction(p), **_frac(guarantee)},
        "value": None,
    }
    try:
        out["value"] = _frac(solve_any(instance, None, limits).value)
    except CapacityError as e:
        logger.warning("bounds: value not computed (%s)", e)
    return out


def conjecture(
    instance: GameInstance,
    max_support: Optional[int] = None,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> Dict[str, Any]:
    report = check_conjecture(instance, max_support, limits)
    return {
        "lp_value": _frac(report.lp_value),
        "best": _frac(report.best),
        "gap": format_fraction(report.gap),
        "verdict": report.verdict,
        "witness": [sorted(e) for e in report.witness],
        "supports_checked": report.supports_checked,
        "complete": report.complete,
        "candidate_sources": list(report.candidate_sources),
    }


def simulate_optimal(
    instance: GameInstance,
    trials: int,
    seed: int,
    workers: int = 1,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> Dict[str, Any]:
    """Plays the solved optimal pair and samples the hider's marginals."""
    solution = solve_any(instance, None, limits)
    if not solution.materialized:
        raise RegimeError(
            f"simulation needs listed strategies, got {solution.searcher_family} vs {solution.hider_family}; "
            "raise the uniform materialization cap"
        )
    report = simulate(instance, solution.searcher, solution.hider, trials, seed, workers, limits)
    freq = empirical_marginals(instance, solution.hider, trials, seed, limits)
    exact = hider_marginals(instance.n, solution.hider)
    return {
        "method": solution.method.value,
        "trials": report.trials,
        "seed": report.seed,
        "algorithm": report.algorithm,
        "mean": report.mean,
        "stderr": report.stderr,
        "exact": _frac(report.exact),
        "z_score": report.z_score,
        "passed": report.passed,
        "marginals": [
            {"box": b, "empirical": f, "exact": format_fraction(y)}
            for b, (f, y) in enumerate(zip(freq, exact), start=1)
        ],
        "max_marginal_error": max(abs(f - float(y)) for f, y in zip(freq, exact)),
    }


__all__ = ["METHOD_NAMES", "parse_method", "solve", "bounds", "conjecture", "simulate_optimal"]
