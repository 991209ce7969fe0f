# app/solvers/dispatch.py
from __future__ import annotations

import logging
from typing import Callable, Dict, Optional

from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import CapacityError, RegimeError
from app.core.game import GameInstance, HypergraphKind, Method, Solution
from app.solvers.equal_rewards import solve_equal_instance
from app.solvers.k1 import solve_k1
from app.solvers.lp_oracle import solve_oracle
from app.solvers.n4k2 import solve_n4k2
from app.solvers.one_uniform import solve_one_uniform

logger = logging.getLogger(__name__)


def _run_one_uniform(instance: GameInstance, limits: SolverLimits) -> Solution:
    return solve_one_uniform(instance).to_solution(instance, limits)


def _run_equal(instance: GameInstance, limits: SolverLimits) -> Solution:
    return solve_equal_instance(instance).to_solution(instance, limits)


def _run_oracle(instance: GameInstance, limits: SolverLimits) -> Solution:
    try:
        return solve_oracle(instance, limits)
    except CapacityError as e:
        raise CapacityError(
            f"{e.bound} (no closed form applies; raise the oracle caps to solve it)",
            e.value,
            e.limit,
        ) from e


_RUNNERS: Dict[Method, Callable[[GameInstance, SolverLimits], Solution]] = {
    Method.ONE_UNIFORM: _run_one_uniform,
    Method.EQUAL_REWARDS: _run_equal,
    Method.K_EQUALS_1: solve_k1,
    Method.N4K2: solve_n4k2,
    Method.LP_ORACLE: _run_oracle,
}


def applicable_method(instance: GameInstance) -> Method:
    """Closed form that covers the instance, else the oracle."""
    hg = instance.hypergraph
    if hg.kind is HypergraphKind.ONE_UNIFORM:
        return Method.ONE_UNIFORM
    if hg.kind is HypergraphKind.COMPLETE:
        if instance.k == instance.n - 1:
            return Method.ONE_UNIFORM
        if len(set(instance.rewards)) == 1 and instance.rewards[0] > 0:
            return Method.EQUAL_REWARDS
        if instance.k == 1:
            return Method.K_EQUALS_1
        if instance.n == 4 and instance.k == 2 and all(r > 0 for r in instance.rewards):
            return Method.N4K2
    return Method.LP_ORACLE


def check_forced(instance: GameInstance, method: Method) -> None:
    hg = instance.hypergraph
    complete = hg.kind is HypergraphKind.COMPLETE
    if method is Method.ONE_UNIFORM:
        if not (hg.kind is HypergraphKind.ONE_UNIFORM or (complete and instance.k == instance.n - 1)):
            raise RegimeError("one-uniform requires a 1-uniform hypergraph, or complete with k=n-1")
    elif method is Method.EQUAL_REWARDS:
        if not complete or len(set(instance.rewards)) != 1 or instance.rewards[0] <= 0:
            raise RegimeError("equal requires the complete hypergraph and identical positive rewards")
    elif method is Method.K_EQUALS_1:
        if not complete or instance.k != 1:
            raise RegimeError("k1 requires k=1 on the complete hypergraph")
    elif method is Method.N4K2:
        if not complete or instance.n != 4 or instance.k != 2:
            raise RegimeError("n4k2 requires n=4, k=2 on the complete hypergraph")
        if any(r <= 0 for r in instance.rewards):
            raise RegimeError("n4k2 requires positive rewards; use the LP oracle")


def solve_any(
    instance: GameInstance,
    method: Optional[Method] = None,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> Solution:
    if method is None:
        method = applicable_method(instance)
    else:
        check_forced(instance, method)
    logger.debug("solving n=%d k=%d with %s", instance.n, instance.k, method.value)
    return _RUNNERS[method](instance, limits)


__all__ = ["applicable_method", "check_forced", "solve_any"]
