# Path from repo root: tests/test_api.py
from __future__ import annotations


def test_health(test_client):
    r = test_client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_request_id_is_echoed(test_client):
    r = test_client.get("/health", headers={"X-Request-ID": "abc123"})
    assert r.headers["X-Request-ID"] == "abc123"
    assert test_client.get("/health").headers.get("X-Request-ID")


def test_list_tasks(test_client):
    r = test_client.get("/tasks")
    assert r.status_code == 200
    services = r.json()
    assert {"bench", "dataset", "train", "verify"} <= set(services)
    assert services["train"]["tasks"] == ["train"]


def test_generate_dataset(test_client):
    body = {"service": "dataset", "task": "generate", "payload": {"n": 3, "d": 4, "eps_sep": 0.5, "seed": 2}}
    r = test_client.post("/tasks/run", json=body)
    assert r.status_code == 200
    data = r.json()
    assert data["ok"] is True
    assert data["result"]["n"] == 3 and data["result"]["d"] == 4
    assert data["result"]["min_distance"] >= 0.5


def test_train_without_iterations(test_client):
    payload = {"m": 32, "d": 4, "n": 3, "T": 0, "eps_sep": 0.5}
    r = test_client.post("/tasks/run", json={"service": "train", "task": "train", "payload": payload})
    assert r.status_code == 200
    result = r.json()["result"]
    assert result["T"] == 0
    assert result["iterations"] == 0
    assert len(result["weights_sha256"]) == 64


def test_engine_error_is_reported_in_body(test_client):
    payload = {"m": 32, "d": 4, "n": 3, "T": 0, "rho": 0.3, "eps_sep": 0.5}
    r = test_client.post("/tasks/run", json={"service": "train", "task": "train", "payload": payload})
    assert r.status_code == 200
    data = r.json()
    assert data["ok"] is False
    assert data["error"].startswith("ConfigError")


def test_unknown_service_is_404(test_client):
    r = test_client.post("/tasks/run", json={"service": "nope", "task": "x"}, headers={"X-Request-ID": "rid-1"})
    assert r.status_code == 404
    body = r.json()
    assert body["code"] == 404
    assert body["path"] == "/tasks/run"
    assert body["request_id"] == "rid-1"


def test_unknown_task_is_404(test_client):
    r = test_client.post("/tasks/run", json={"service": "verify", "task": "fly"})
    assert r.status_code == 404


def test_malformed_request_is_422(test_client):
    r = test_client.post("/tasks/run", json={"task": "train"})
    assert r.status_code == 422
    assert r.json()["message"] == "Validation error"
