# Path from repo root: tests/test_services.py
from __future__ import annotations

import math

import pytest

from app.core.errors import ConfigError, UnknownTaskError
from app.services.bench.service import bench_hsr_point, loglog_slope, tau_for_active_fraction
from app.services.registry import get_service_instance, list_services, run_task
from app.services.verify.suites import run_suite, suite_names


# ---------------------------
# Registry
# ---------------------------
def test_registry_lists_services_from_manifests():
    services = list_services()
    assert {"bench", "dataset", "train", "verify"} <= set(services)
    assert set(services["bench"]["tasks"]) == {"bench_hsr", "bench_iteration"}


def test_registry_caches_instances():
    assert get_service_instance("dataset") is get_service_instance("dataset")


def test_unknown_service_and_task():
    with pytest.raises(UnknownTaskError):
        run_task("nope", "x")
    with pytest.raises(UnknownTaskError):
        run_task("dataset", "shuffle")


def test_payload_validation_surfaces_as_config_error():
    with pytest.raises(ConfigError):
        run_task("dataset", "generate", {"n": 0})
    with pytest.raises(ConfigError):
        run_task("train", "train", {"width": 8})


def test_separability_task_reads_a_saved_dataset(tmp_path):
    out = tmp_path / "d.csv"
    run_task("dataset", "generate", {"n": 4, "d": 5, "eps_sep": 0.4, "rho": 0.1, "seed": 1, "out": str(out)})
    result = run_task("dataset", "separability", {"path": str(out)})
    assert result["separable"] is True
    assert result["measured_eps"] >= 0.4
    assert result["measured_gamma"] > 0.0


def test_train_task_is_deterministic():
    payload = {"m": 64, "d": 4, "n": 3, "T": 3, "eps_sep": 0.5, "seed": 7, "log_every": 0}
    a = run_task("train", "train", payload)
    b = run_task("train", "train", {**payload, "engine": "dense"})
    assert a["weights_sha256"] == b["weights_sha256"]
    assert a["iterations"] == 3


# ---------------------------
# Bench helpers
# ---------------------------
def test_tau_for_active_fraction():
    assert tau_for_active_fraction(1024, 1.0) == -math.inf
    assert tau_for_active_fraction(1024, 0.5) == pytest.approx(0.0, abs=1e-12)
    assert tau_for_active_fraction(1024, 0.01) > 0.0
    with pytest.raises(ConfigError):
        tau_for_active_fraction(1024, 0.0)


def test_loglog_slope():
    assert loglog_slope([1, 2, 4], [1, 2, 4]) == pytest.approx(1.0)
    assert loglog_slope([4, 16], [2, 4]) == pytest.approx(0.5)
    assert math.isnan(loglog_slope([8], [3]))
    assert math.isnan(loglog_slope([8, 16], [0, 3]))


def test_bench_iteration_rejects_negative_tau():
    with pytest.raises(ConfigError):
        run_task("bench", "bench_iteration", {"m_list": [64], "active_frac": 0.9})


def test_bench_iteration_small_widths():
    result = run_task("bench", "bench_iteration", {"d": 4, "n": 3, "m_list": [64, 128], "trials": 1, "active_frac": 0.2})
    assert [r["m"] for r in result["rows"]] == [64, 128]
    assert result["csv"].splitlines()[0].endswith("t_update_ns")
    for row in result["rows"]:
        assert type(row["hsr_iter_ns"]) is float
        assert row["union_size"] >= 0.0


def test_bench_hsr_point_averages_over_trials():
    row = bench_hsr_point(256, 4, 0.05, trials=5, warmup=1, seed=3)
    for key in ("mean_query_ns", "mean_visits", "mean_reported", "dense_ns"):
        assert type(row[key]) is float
    assert 0.0 <= row["mean_reported"] <= 256.0
    assert row["mean_visits"] >= 1.0


# ---------------------------
# Verification suites
# ---------------------------
@pytest.mark.parametrize("suite", ["hsr", "poly", "gradient", "engine-equivalence", "robust-fit"])
def test_quick_suite_passes(suite):
    checks = run_suite(suite, "quick", seed=0)
    assert checks
    failed = [c for c in checks if not c.passed]
    assert not failed, failed


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["activation", "coupling", "convergence", "scaling"])
def test_statistical_quick_suite_passes(suite):
    checks = run_suite(suite, "quick", seed=0)
    failed = [c for c in checks if not c.passed]
    assert not failed, failed


def test_unknown_suite_or_profile():
    assert "all" in suite_names()
    with pytest.raises(UnknownTaskError):
        run_suite("nope", "quick")
    with pytest.raises(UnknownTaskError):
        run_suite("hsr", "medium")


def test_verify_task_reports_failures_list():
    result = run_task("verify", "verify", {"suite": "poly", "profile": "quick"})
    assert result["passed"] is True
    assert result["failed"] == []
    assert result["checks"] > 0
