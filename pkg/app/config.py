# app/config.py
from __future__ import annotations

import os
from dataclasses import dataclass, fields


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise RuntimeError(f"{name} must be an integer, got {raw!r}") from e


@dataclass(frozen=True)
class SolverLimits:
    oracle_max_n: int = 12
    oracle_max_rows: int = 50_000
    sweep_max_pure: int = 200_000
    partition_max_n: int = 40
    uniform_materialize_cap: int = 1_000_000
    conjecture_max_support: int = 8
    conjecture_budget: int = 100_000
    mc_block_size: int = 65_536

    @classmethod
    def from_env(cls) -> "SolverLimits":
        """
        Overrides come from BOOBYTRAP_<FIELD> (e.g. BOOBYTRAP_ORACLE_MAX_N).
        Call load_dotenv() first if a .env file should be honoured.
        """
        kwargs = {}
        for f in fields(cls):
            kwargs[f.name] = _env_int(f"BOOBYTRAP_{f.name.upper()}", f.default)
        return cls(**kwargs)


FLOAT_TOLERANCE = 1e-9

DEFAULT_LIMITS = SolverLimits()

__all__ = ["SolverLimits", "DEFAULT_LIMITS", "FLOAT_TOLERANCE"]
