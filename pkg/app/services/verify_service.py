# app/services/verify_service.py
from __future__ import annotations

import csv
import json
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import DomainError
from app.core.game import GameInstance, Hypergraph, Method
from app.ops.instance_io import format_fraction
from app.solvers.dispatch import solve_any
from app.solvers.lp_oracle import solve_oracle

logger = logging.getLogger(__name__)

REWARD_LOW = 1
REWARD_HIGH = 100

OUTPUT_COLUMNS = [
    "index",
    "family",
    "rewards",
    "k",
    "closed_form",
    "oracle",
    "match",
    "certified",
]


def _timestamp_str() -> str:
    return datetime.now().strftime("%Y%m%d_%H%M%S")


def _reward(rng: random.Random) -> int:
    return rng.randint(REWARD_LOW, REWARD_HIGH)


def _one_uniform(rng: random.Random) -> GameInstance:
    n = rng.randint(2, 7)
    k = rng.randint(1, n - 1)
    # |A| > k; otherwise every edge meets the trap set
    boxes = rng.sample(range(1, n + 1), rng.randint(k + 1, n))
    return GameInstance.create([_reward(rng) for _ in range(n)], k, Hypergraph.one_uniform(boxes))


def _equal(rng: random.Random) -> GameInstance:
    n = rng.randint(2, 8)
    k = rng.randint(1, n - 1)
    return GameInstance.create([_reward(rng)] * n, k)


def _k1(rng: random.Random) -> GameInstance:
    n = rng.randint(2, 8)
    return GameInstance.create([_reward(rng) for _ in range(n)], 1)


def _n4k2(rng: random.Random) -> GameInstance:
    return GameInstance.create([_reward(rng) for _ in range(4)], 2)


FAMILIES: Dict[str, Callable[[random.Random], GameInstance]] = {
    "one_uniform": _one_uniform,
    "equal": _equal,
    "k1": _k1,
    "n4k2": _n4k2,
}

FAMILY_METHOD: Dict[str, Method] = {
    "one_uniform": Method.ONE_UNIFORM,
    "equal": Method.EQUAL_REWARDS,
    "k1": Method.K_EQUALS_1,
    "n4k2": Method.N4K2,
}


def random_instances(family: str, count: int, seed: int) -> List[GameInstance]:
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}")
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    rng = random.Random(seed)
    make = FAMILIES[family]
    return [make(rng) for _ in range(count)]


def _check_one(index: int, family: str, instance: GameInstance, limits: SolverLimits) -> dict:
    closed = solve_any(instance, FAMILY_METHOD[family], limits)
    oracle = solve_oracle(instance, limits)
    match = closed.value == oracle.value
    if not match:
        logger.warning(
            "instance %d (%s) mismatch: closed=%s oracle=%s rewards=%s k=%d",
            index, family, closed.value, oracle.value, [str(r) for r in instance.rewards], instance.k,
        )
    return {
        "index": index,
        "family": family,
        "rewards": " ".join(format_fraction(r) for r in instance.rewards),
        "k": instance.k,
        "closed_form": format_fraction(closed.value),
        "oracle": format_fraction(oracle.value),
        "match": match,
        "certified": closed.certified,
    }


def _write_json(rows: List[dict], path: Path) -> None:
    path.write_text(json.dumps(rows, ensure_ascii=False, indent=2), encoding="utf-8")


def _write_csv(rows: List[dict], path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=OUTPUT_COLUMNS)
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k, "") for k in OUTPUT_COLUMNS})


def verify_family(
    family: str,
    count: int,
    seed: int,
    out_dir: Optional[Union[str, Path]] = None,
    workers: int = 1,
    limits: SolverLimits = DEFAULT_LIMITS,
) -> Dict[str, object]:
    instances = random_instances(family, count, seed)
    jobs = list(enumerate(instances))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda job: _check_one(job[0], family, job[1], limits), jobs))
    else:
        rows = [_check_one(i, family, inst, limits) for i, inst in jobs]

    matches = sum(1 for r in rows if r["match"])
    certified = sum(1 for r in rows if r["certified"])
    result: Dict[str, object] = {
        "ok": matches == count,
        "family": family,
        "count": count,
        "seed": seed,
        "matches": matches,
        "certified": certified,
        "summary": f"{matches}/{count} exact matches",
        "files": None,
    }

    if out_dir is not None:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        ts = _timestamp_str()
        json_path = d / f"verify_{family}_{ts}.json"
        csv_path = d / f"verify_{family}_{ts}.csv"
        _write_json(rows, json_path)
        _write_csv(rows, csv_path)
        result["files"] = {"json": str(json_path), "csv": str(csv_path)}

    logger.info("verify %s: %s", family, result["summary"])
    return result


__all__ = ["FAMILIES", "FAMILY_METHOD", "OUTPUT_COLUMNS", "random_instances", "verify_family"]
