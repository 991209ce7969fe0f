import json

import pytest

from app.cli import EXIT_OK, EXIT_PARSE, EXIT_REGIME, main


@pytest.fixture
def instance_file(tmp_path):
    def _write(data, name="game.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return _write


def test_solve_writes_result(tmp_path, instance_file, capsys):
    path = instance_file({"rewards": [10, 10, 1], "k": 1, "hypergraph": {"kind": "one_uniform", "boxes": [1, 2, 3]}})
    out = tmp_path / "res" / "result.json"
    assert main(["solve", "--instance", path, "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["value"] == "5/1"
    assert data["method"] == "one_uniform"
    assert "[OK] value=5/1" in capsys.readouterr().err


def test_solve_prints_to_stdout(instance_file, capsys):
    path = instance_file({"rewards": [1] * 6, "k": 2})
    assert main(["solve", "--instance", path]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["value"] == "4/5"


def test_forced_method_out_of_regime(instance_file, capsys):
    path = instance_file({"rewards": [5, 4, 3, 2, 1], "k": 2})
    assert main(["solve", "--instance", path, "--method", "n4k2"]) == EXIT_REGIME
    assert "n4k2 requires n=4, k=2" in capsys.readouterr().err


def test_parse_error(instance_file, capsys):
    path = instance_file({"rewards": [1, "x"], "k": 1})
    assert main(["solve", "--instance", path]) == EXIT_PARSE
    assert "parse error at rewards.1" in capsys.readouterr().err


def test_missing_instance_file(tmp_path, capsys):
    assert main(["bounds", "--instance", str(tmp_path / "none.json")]) == EXIT_PARSE
    assert "[ERR]" in capsys.readouterr().err


def test_bounds(instance_file, capsys):
    path = instance_file({"rewards": [1] * 6, "k": 2})
    assert main(["bounds", "--instance", path]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["upper"]["exact"] == "8/9"


def test_conjecture(instance_file, capsys):
    path = instance_file({"rewards": [10, 10, 1], "k": 1})
    assert main(["conjecture", "--instance", path]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["gap"] == "0/1"


def test_simulate(instance_file, capsys):
    path = instance_file({"rewards": [5, 4, 3], "k": 1})
    assert main(["simulate", "--instance", path, "--trials", "20000", "--seed", "7", "--workers", "2"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["exact"]["exact"] == "35/12"
    assert data["trials"] == 20_000


def test_verify(tmp_path, capsys):
    code = main(["verify", "--family", "n4k2", "--count", "20", "--seed", "1", "--out-dir", str(tmp_path)])
    assert code == EXIT_OK
    captured = capsys.readouterr()
    assert "20/20 exact matches" in captured.out
    assert "wrote CSV" in captured.err
    assert len(list(tmp_path.glob("verify_n4k2_*.csv"))) == 1


def test_solve_large_equal_rewards_symbolically(instance_file, capsys):
    path = instance_file({"rewards": [1] * 30, "k": 2})
    assert main(["solve", "--instance", path]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["method"] == "equal"
    assert data["searcher_strategy"] == []
    assert data["hider_family"] == "uniform over [30]^(2)"

    assert main(["simulate", "--instance", path, "--trials", "100"]) == EXIT_REGIME
    assert "needs listed strategies" in capsys.readouterr().err
