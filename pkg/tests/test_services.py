import csv
import json
import time
from fractions import Fraction

import pytest

from app.config import DEFAULT_LIMITS, SolverLimits
from app.core.errors import CapacityError, DomainError
from app.core.game import GameInstance, Method
from app.ops.instance_io import InstanceParseError
from app.services import solve_service
from app.services.verify_service import OUTPUT_COLUMNS, random_instances, verify_family

F = Fraction


def test_parse_method():
    assert solve_service.parse_method(None) is None
    assert solve_service.parse_method("auto") is None
    assert solve_service.parse_method("One-Uniform") is Method.ONE_UNIFORM
    assert solve_service.parse_method("lp") is Method.LP_ORACLE
    with pytest.raises(InstanceParseError) as exc:
        solve_service.parse_method("simplex")
    assert exc.value.field == "method"


def test_solve_forced_lp_agrees_with_auto():
    inst = GameInstance.create((5, 4, 3), 1)
    auto = solve_service.solve(inst)
    lp = solve_service.solve(inst, "lp")
    assert auto["value"] == lp["value"] == "35/12"
    assert auto["method"] == Method.K_EQUALS_1.value
    assert lp["method"] == Method.LP_ORACLE.value


def test_bounds_equal_rewards():
    out = solve_service.bounds(GameInstance.create([1] * 6, 2))
    assert out["lower"]["exact"] == "16/27"
    assert out["upper"]["exact"] == "8/9"
    assert out["equal_split_lower"]["exact"] == "2/3"
    assert out["independent_open"]["p"] == "3/10"
    assert out["value"]["exact"] == "4/5"


def test_bounds_without_value_when_too_large():
    inst = GameInstance.create(list(range(1, 16)), 3)
    out = solve_service.bounds(inst)
    assert out["value"] is None
    assert F(out["lower"]["exact"]) <= F(out["upper"]["exact"])


def test_conjecture_payload():
    out = solve_service.conjecture(GameInstance.create((10, 10, 1), 1))
    assert out["gap"] == "0/1"
    assert out["verdict"] == "consistent"
    assert out["witness"] == [[1], [2, 3]]
    assert out["lp_value"]["exact"] == "110/21"


def test_simulate_optimal_payload():
    out = solve_service.simulate_optimal(GameInstance.create((1, 1, 1), 2), trials=50_000, seed=4)
    assert out["exact"]["exact"] == "1/3"
    assert out["passed"]
    assert [m["exact"] for m in out["marginals"]] == ["2/3"] * 3
    assert out["max_marginal_error"] < 0.02


def test_verify_all_families_within_a_minute():
    start = time.perf_counter()
    for family in ("one_uniform", "equal", "k1", "n4k2"):
        result = verify_family(family, 200, seed=3)
        assert result["ok"], family
        assert result["summary"] == "200/200 exact matches"
        assert result["certified"] == 200
        assert result["files"] is None
    assert time.perf_counter() - start < 60


def test_one_uniform_instances_leave_an_untrapped_box():
    for inst in random_instances("one_uniform", 300, seed=5):
        assert len(inst.hypergraph.boxes) > inst.k


def test_verify_family_writes_files(tmp_path):
    result = verify_family("n4k2", 5, seed=1, out_dir=tmp_path / "out", workers=3)
    assert result["ok"]
    rows = json.loads(open(result["files"]["json"], encoding="utf-8").read())
    assert [r["index"] for r in rows] == list(range(5))
    with open(result["files"]["csv"], newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        assert reader.fieldnames == OUTPUT_COLUMNS
        assert len(list(reader)) == 5


def test_random_instances_reproducible():
    a = random_instances("k1", 10, seed=42)
    b = random_instances("k1", 10, seed=42)
    assert a == b
    assert all(inst.k == 1 for inst in a)
    with pytest.raises(DomainError):
        random_instances("triangle", 1, seed=0)
    with pytest.raises(DomainError):
        random_instances("k1", 0, seed=0)


def test_limits_from_env(monkeypatch):
    monkeypatch.setenv("BOOBYTRAP_ORACLE_MAX_N", "5")
    limits = SolverLimits.from_env()
    assert limits.oracle_max_n == 5
    assert limits.mc_block_size == DEFAULT_LIMITS.mc_block_size
    with pytest.raises(CapacityError):
        solve_service.solve(GameInstance.create((6, 5, 4, 3, 2, 1), 2), "lp", limits)

    monkeypatch.setenv("BOOBYTRAP_ORACLE_MAX_N", "many")
    with pytest.raises(RuntimeError):
        SolverLimits.from_env()
