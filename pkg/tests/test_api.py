import pytest
from fastapi.testclient import TestClient

from app.main import app

THREE_BOX_ONE_UNIFORM = {"rewards": [10, 10, 1], "k": 1, "hypergraph": {"kind": "one_uniform", "boxes": [1, 2, 3]}}


@pytest.fixture
def client():
    return TestClient(app)


def test_solve(client):
    res = client.post("/api/v1/solve", json=THREE_BOX_ONE_UNIFORM)
    assert res.status_code == 200
    body = res.json()
    assert body["value"] == "5/1"
    assert body["method"] == "one_uniform"
    assert body["certificates"]["certified"] is True


def test_solve_forced_method(client):
    res = client.post("/api/v1/solve", json={"rewards": [5, 4, 3], "k": 1, "method": "lp"})
    assert res.status_code == 200
    assert res.json()["value"] == "35/12"


def test_solve_regime_conflict(client):
    res = client.post("/api/v1/solve", json={"rewards": [5, 4, 3, 2, 1], "k": 2, "method": "n4k2"})
    assert res.status_code == 409
    assert "n4k2 requires n=4, k=2" in res.json()["detail"]


def test_solve_unknown_method(client):
    res = client.post("/api/v1/solve", json={"rewards": [5, 4, 3], "k": 1, "method": "guess"})
    assert res.status_code == 422
    assert res.json()["detail"]["field"] == "method"


def test_solve_bad_body(client):
    res = client.post("/api/v1/solve", json={"rewards": [1, 2], "k": "two"})
    assert res.status_code == 422


def test_solve_invalid_k(client):
    res = client.post("/api/v1/solve", json={"rewards": [1, 2], "k": 2})
    assert res.status_code == 422
    assert res.json()["detail"]["field"] == "k"


def test_bounds(client):
    res = client.post("/api/v1/bounds", json={"rewards": [1] * 6, "k": 2})
    assert res.status_code == 200
    body = res.json()
    assert body["lower"]["exact"] == "16/27"
    assert body["upper"]["exact"] == "8/9"


def test_bounds_need_complete(client):
    res = client.post("/api/v1/bounds", json=THREE_BOX_ONE_UNIFORM)
    assert res.status_code == 409


def test_conjecture(client):
    res = client.post("/api/v1/conjecture", params={"max_support": 4}, json={"rewards": [10, 10, 1], "k": 1})
    assert res.status_code == 200
    assert res.json()["verdict"] == "consistent"


def test_simulate(client):
    res = client.post("/api/v1/simulate", params={"trials": 20_000, "seed": 3}, json=THREE_BOX_ONE_UNIFORM)
    assert res.status_code == 200
    body = res.json()
    assert body["trials"] == 20_000
    assert body["algorithm"] == "PCG64"
    assert body["exact"]["exact"] == "5/1"


def test_simulate_rejects_zero_trials(client):
    res = client.post("/api/v1/simulate", params={"trials": 0}, json=THREE_BOX_ONE_UNIFORM)
    assert res.status_code == 422


def test_verify(client):
    res = client.get("/api/v1/verify", params={"family": "n4k2", "count": 4, "seed": 2})
    assert res.status_code == 200
    assert res.json()["summary"] == "4/4 exact matches"


def test_verify_unknown_family(client):
    res = client.get("/api/v1/verify", params={"family": "triangle", "count": 1})
    assert res.status_code == 422
