# Path from repo root: tests/test_env_endpoint.py
import importlib
import sys

import pytest
from starlette.testclient import TestClient


def reload_app_with_env(monkeypatch, env):
    for k, v in env.items():
        monkeypatch.setenv(k, v)
    config = importlib.import_module("app.core.config")
    config.get_settings.cache_clear()
    if "app.main" in sys.modules:
        importlib.reload(sys.modules["app.main"])
    else:
        importlib.import_module("app.main")
    from app.main import app

    return app


@pytest.fixture
def restore_app(monkeypatch):
    yield
    monkeypatch.undo()
    importlib.import_module("app.core.config").get_settings.cache_clear()
    importlib.reload(sys.modules["app.main"])


@pytest.mark.parametrize(
    "env,expect",
    [
        ({"ADVTRAIN_ENV": "development", "ADVTRAIN_EXPOSE_ENV_ENDPOINT": "0", "ADVTRAIN_ENV_SECRET_TOKEN": ""}, [200, 200, 200, 200]),
        ({"ADVTRAIN_ENV": "production", "ADVTRAIN_EXPOSE_ENV_ENDPOINT": "0", "ADVTRAIN_ENV_SECRET_TOKEN": ""}, [200, 404, 200, 200]),
        (
            {"ADVTRAIN_ENV": "production", "ADVTRAIN_EXPOSE_ENV_ENDPOINT": "1", "ADVTRAIN_ENV_SECRET_TOKEN": "supersecret"},
            [200, 403, 200, 200],
        ),
    ],
)
def test_env_endpoint(monkeypatch, restore_app, env, expect):
    app = reload_app_with_env(monkeypatch, env)
    with TestClient(app) as c:
        assert c.get("/health").status_code == expect[0]
        r = c.get("/env")
        assert r.status_code == expect[1]
        if expect[1] == 200:
            assert r.json()["env"] == env["ADVTRAIN_ENV"]
        if expect[1] == 403:
            ok = c.get("/env", headers={"X-Admin-Token": "supersecret"})
            assert ok.status_code == 200
            assert "hsr" in ok.json()
        assert c.get("/docs").status_code == expect[2]
        assert c.get("/redoc").status_code == expect[3]
