# app/ops/instance_io.py
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import (
    AfterValidator,
    BaseModel,
    ConfigDict,
    Field,
    StrictFloat,
    StrictInt,
    ValidationError,
)

from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import BoobyTrapError, InvalidInstanceError, InvalidStrategyError
from app.core.game import (
    Certificates,
    GameInstance,
    HiderStrategy,
    Hypergraph,
    HypergraphKind,
    Method,
    SearcherStrategy,
    Solution,
    certify,
    to_fraction,
)

logger = logging.getLogger(__name__)


class InstanceParseError(BoobyTrapError):
    def __init__(self, field: str, message: str) -> None:
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


# -------------------------------------------------------------------
# Instance file schema
# -------------------------------------------------------------------
def _check_reward(v: Any) -> Any:
    try:
        r = to_fraction(v)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a number or fraction: {v!r}") from e
    if r < 0:
        raise ValueError(f"reward must be nonnegative, got {v!r}")
    return v


Reward = Annotated[Union[StrictInt, StrictFloat, str], AfterValidator(_check_reward)]


class CompleteSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["complete"]


class OneUniformSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["one_uniform"]
    boxes: List[StrictInt]


class ExplicitSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["explicit"]
    edges: List[List[StrictInt]]


HypergraphSpec = Annotated[
    Union[CompleteSpec, OneUniformSpec, ExplicitSpec],
    Field(discriminator="kind"),
]


class InstanceFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rewards: List[Reward]
    k: StrictInt
    hypergraph: HypergraphSpec = Field(default_factory=lambda: CompleteSpec(kind="complete"))

    def to_hypergraph(self) -> Hypergraph:
        hg = self.hypergraph
        if isinstance(hg, OneUniformSpec):
            return Hypergraph.one_uniform(hg.boxes)
        if isinstance(hg, ExplicitSpec):
            return Hypergraph.explicit(hg.edges)
        return Hypergraph.complete()

    def to_instance(self) -> GameInstance:
        try:
            return GameInstance.create(self.rewards, self.k, self.to_hypergraph())
        except InvalidInstanceError as e:
            raise InstanceParseError(_field_of(str(e)), str(e)) from e


class SolveRequest(InstanceFile):
    method: Optional[str] = None


def _field_of(message: str) -> str:
    if message.startswith("k "):
        return "k"
    if message.startswith("reward") or "two boxes" in message:
        return "rewards"
    return "hypergraph"


def _loc(loc: tuple) -> str:
    return ".".join(str(p) for p in loc) or "<root>"


def parse_instance(data: Any) -> GameInstance:
    if not isinstance(data, dict):
        raise InstanceParseError("<root>", "instance must be a JSON object")
    try:
        model = InstanceFile.model_validate(data)
    except ValidationError as e:
        err = e.errors()[0]
        raise InstanceParseError(_loc(err["loc"]), err["msg"]) from e
    return model.to_instance()


def load_instance(path: Union[str, Path]) -> GameInstance:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceParseError("<file>", f"cannot read {p}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceParseError(f"line {e.lineno}, column {e.colno}", e.msg) from e
    return parse_instance(data)


def instance_to_dict(instance: GameInstance) -> Dict[str, Any]:
    hg = instance.hypergraph
    if hg.kind is HypergraphKind.ONE_UNIFORM:
        graph: Dict[str, Any] = {"kind": hg.kind.value, "boxes": list(hg.boxes)}
    elif hg.kind is HypergraphKind.EXPLICIT:
        graph = {"kind": hg.kind.value, "edges": [sorted(e) for e in hg.edges]}
    else:
        graph = {"kind": hg.kind.value}
    return {
        "rewards": [format_fraction(r) for r in instance.rewards],
        "k": instance.k,
        "hypergraph": graph,
    }


# -------------------------------------------------------------------
# Result file
# -------------------------------------------------------------------
def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _atoms_to_rows(atoms, key: str) -> List[Dict[str, Any]]:
    return [
        {key: sorted(e), "prob": format_fraction(p), "prob_float": float(p)}
        for e, p in atoms
        if p
    ]


def solution_to_result(instance: GameInstance, solution: Solution) -> Dict[str, Any]:
    c = solution.certificates
    certificates = None
    if c is not None:
        certificates = {
            "searcher_guarantee": format_fraction(c.searcher_guarantee),
            "hider_guarantee": format_fraction(c.hider_guarantee),
            "certified": solution.certified,
        }
    return {
        "value": format_fraction(solution.value),
        "value_float": float(solution.value),
        "method": solution.method.value,
        "instance": instance_to_dict(instance),
        "searcher_strategy": _atoms_to_rows(solution.searcher.atoms, "edge") if solution.searcher else [],
        "hider_strategy": _atoms_to_rows(solution.hider.atoms, "boxes") if solution.hider else [],
        "searcher_family": solution.searcher_family,
        "hider_family": solution.hider_family,
        "certificates": certificates,
    }


def write_json(data: Any, path: Union[str, Path]) -> Path:
    p = Path(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(data, ensure_ascii=False, indent=2), encoding="utf-8")
    return p


@dataclass(frozen=True)
class StoredResult:
    instance: GameInstance
    solution: Solution
    stored_searcher_guarantee: Optional[Fraction]
    stored_hider_guarantee: Optional[Fraction]


def result_from_dict(data: Dict[str, Any]) -> StoredResult:
    try:
        instance = parse_instance(data["instance"])
        s_rows, h_rows = data["searcher_strategy"], data["hider_strategy"]
        searcher = SearcherStrategy.from_atoms((row["edge"], row["prob"]) for row in s_rows) if s_rows else None
        hider = HiderStrategy.from_atoms((row["boxes"], row["prob"]) for row in h_rows) if h_rows else None
        value = Fraction(data["value"])
        method = Method(data["method"])
    except InstanceParseError:
        raise
    except KeyError as e:
        raise InstanceParseError(str(e.args[0]), "missing key in result file") from e
    except (InvalidStrategyError, ValueError) as e:
        raise InstanceParseError("<result>", str(e)) from e
    stored = data.get("certificates") or {}
    sg = stored.get("searcher_guarantee")
    hg = stored.get("hider_guarantee")
    return StoredResult(
        instance=instance,
        solution=Solution(
            value=value,
            searcher=searcher,
            hider=hider,
            method=method,
            searcher_family=data.get("searcher_family"),
            hider_family=data.get("hider_family"),
        ),
        stored_searcher_guarantee=Fraction(sg) if sg is not None else None,
        stored_hider_guarantee=Fraction(hg) if hg is not None else None,
    )


def load_result(path: Union[str, Path]) -> StoredResult:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InstanceParseError(f"line {e.lineno}, column {e.colno}", e.msg) from e
    return result_from_dict(data)


def recheck_result(stored: StoredResult, limits: SolverLimits = DEFAULT_LIMITS) -> Optional[Certificates]:
    """
    Re-runs both guarantee sweeps for a loaded result. Returns the fresh
    certificates when they match what was stored, raises otherwise.
    """
    if not stored.solution.materialized:
        logger.warning("Result lists no strategies; nothing to recheck")
        return None
    fresh = certify(stored.instance, stored.solution.searcher, stored.solution.hider, limits)
    if fresh is None:
        return None
    if (fresh.searcher_guarantee, fresh.hider_guarantee) != (
        stored.stored_searcher_guarantee,
        stored.stored_hider_guarantee,
    ):
        raise InvalidStrategyError(
            f"stored guarantees ({stored.stored_searcher_guarantee}, {stored.stored_hider_guarantee}) "
            f"do not match recomputed ({fresh.searcher_guarantee}, {fresh.hider_guarantee})"
        )
    return fresh


__all__ = [
    "InstanceParseError",
    "InstanceFile",
    "SolveRequest",
    "parse_instance",
    "load_instance",
    "instance_to_dict",
    "format_fraction",
    "solution_to_result",
    "write_json",
    "StoredResult",
    "result_from_dict",
    "load_result",
    "recheck_result",
]
