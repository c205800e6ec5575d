# Path from repo root: tests/test_config_logging.py
from __future__ import annotations

import io
import logging

import pytest

from app.core.config import Settings
from app.core.logging_ import StartsWithFilter, setup_logging


def test_settings_read_prefixed_environment(monkeypatch):
    monkeypatch.setenv("ADVTRAIN_WORKERS", "3")
    monkeypatch.setenv("ADVTRAIN_HSR_LEAF_SIZE", "8")
    s = Settings()
    assert s.WORKERS == 3
    assert s.summary()["hsr"]["leaf_size"] == 8
    assert s.summary()["workers"] == 3


def test_settings_validate_ranges(monkeypatch):
    monkeypatch.setenv("ADVTRAIN_WORKERS", "0")
    with pytest.raises(ValueError):
        Settings()


def test_starts_with_filter():
    f = StartsWithFilter("trainer")
    rec = logging.LogRecord("trainer.loop", logging.INFO, __file__, 1, "x", None, None)
    other = logging.LogRecord("services.bench", logging.INFO, __file__, 1, "x", None, None)
    assert f.filter(rec)
    assert not f.filter(other)


def test_setup_logging_routes_to_stream_and_trainer_file(tmp_path):
    stream = io.StringIO()
    s = Settings(
        LOG_LEVEL="warning",
        LOG_LEVEL_TRAINER="info",
        LOG_TRAINER_TO_FILE=True,
        TRAINER_LOG_FILE=tmp_path / "trainer.log",
    )
    root = logging.getLogger()
    saved = root.handlers[:], root.level
    try:
        setup_logging(s, stream=stream)
        logging.getLogger("trainer.loop").info("iteration 1")
        logging.getLogger("services.bench").info("ignored")
        logging.getLogger("services.bench").warning("shown")
        for h in root.handlers:
            h.flush()
        console = stream.getvalue()
        assert "shown" in console and "iteration 1" not in console
        trainer_log = (tmp_path / "trainer.log").read_text(encoding="utf-8")
        assert "iteration 1" in trainer_log and "shown" not in trainer_log
    finally:
        for h in root.handlers:
            h.close()
        root.handlers[:] = saved[0]
        root.setLevel(saved[1])


def test_setup_logging_twice_keeps_one_console_handler():
    stream = io.StringIO()
    s = Settings(LOG_LEVEL="info", LOG_TRAINER_TO_FILE=False, LOG_ERRORS_TO_FILE=False)
    root = logging.getLogger()
    saved = root.handlers[:], root.level
    try:
        setup_logging(s, stream=stream)
        setup_logging(s, stream=stream)
        assert len(root.handlers) == 1
        logging.getLogger("services.train").info("once")
        root.handlers[0].flush()
        assert stream.getvalue().count("once") == 1
    finally:
        for h in root.handlers:
            h.close()
        root.handlers[:] = saved[0]
        root.setLevel(saved[1])
