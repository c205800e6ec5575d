# Path from repo root: tests/test_cli.py
from __future__ import annotations

import pytest

from app.cli import main, parse
from app.core.errors import (
    EXIT_RUNTIME,
    EXIT_USAGE,
    ConfigError,
    IndexCorruptionError,
    SeparabilityError,
    UnknownTaskError,
    exit_code_for,
)
from app.data.io import load_csv
from app.trainer import METRICS_COLUMNS


def test_train_with_zero_iterations_prints_the_header(capsys):
    code = main(["train", "--m", "64", "--d", "4", "--n", "3", "--T", "0", "--eps-sep", "0.5"])
    out, err = capsys.readouterr()
    assert code == 0
    assert out == ",".join(METRICS_COLUMNS) + "\n"
    assert "weights_sha256=" in err


def test_train_writes_metrics_file(tmp_path, capsys):
    target = tmp_path / "metrics.csv"
    code = main(["train", "--m", "32", "--d", "4", "--n", "3", "--T", "2", "--out", str(target)])
    out, _ = capsys.readouterr()
    assert code == 0
    assert out == ""
    lines = target.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(METRICS_COLUMNS)
    assert len(lines) == 3


@pytest.mark.parametrize(
    ("exc", "code"),
    [
        (ConfigError("bad m"), EXIT_USAGE),
        (UnknownTaskError("no such task"), EXIT_USAGE),
        (IndexCorruptionError("stale node"), EXIT_RUNTIME),
        (SeparabilityError("too close"), EXIT_RUNTIME),
        (RuntimeError("boom"), EXIT_RUNTIME),
    ],
)
def test_exit_code_for(exc, code):
    assert exit_code_for(exc) == code


def test_unknown_flag_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["train", "--width", "8"])
    assert exc.value.code == 2


def test_bad_width_list_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["bench-hsr", "--m-list", "256,big"])
    assert exc.value.code == 2


def test_config_file_is_overridden_by_flags(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# run\nm = 1024\neps_sep=0.7\nT=3\nno_diagnostics = true\n", encoding="utf-8")
    args = parse(["train", "--config", str(cfg), "--m", "32"])
    assert args.m == 32
    assert args.eps_sep == 0.7
    assert args.T == 3
    assert args.track_diagnostics is False


def test_config_file_with_unknown_key_is_a_usage_error(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("width=8\n", encoding="utf-8")
    with pytest.raises(SystemExit) as exc:
        parse(["train", "--config", str(cfg)])
    assert exc.value.code == 2


def test_separation_below_twice_the_budget_exits_2(capsys):
    code = main(["train", "--m", "32", "--d", "4", "--n", "3", "--rho", "0.3", "--eps-sep", "0.5", "--T", "0"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_gen_data_writes_a_loadable_file(tmp_path, capsys):
    target = tmp_path / "data.csv"
    code = main(["gen-data", "--n", "5", "--d", "4", "--eps-sep", "0.4", "--seed", "3", "--out", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    ds = load_csv(target)
    assert (ds.n, ds.d) == (5, 4)


def test_bench_hsr_reports_slope(capsys):
    code = main(["bench-hsr", "--d", "4", "--m-list", "256,512", "--trials", "4", "--warmup", "0"])
    out, err = capsys.readouterr()
    assert code == 0
    assert out.splitlines()[0] == "m,d,mean_query_ns,mean_visits,mean_reported,dense_ns"
    assert len(out.splitlines()) == 3
    assert "loglog_slope=" in err


def test_verify_poly_suite_passes(capsys):
    code = main(["verify", "--suite", "poly", "--profile", "quick"])
    out, _ = capsys.readouterr()
    assert code == 0
    assert out.startswith("suite,check,value,bound,pass")
