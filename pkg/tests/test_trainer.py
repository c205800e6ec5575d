# Path from repo root: tests/test_trainer.py
from __future__ import annotations

import math

import numpy as np
import pytest

from app.adversary.config import AdversaryConfig
from app.core.errors import ConfigError
from app.data.dataset import Dataset, sample_sphere_cap
from app.net.network import NetworkParams, exact_active_set
from app.net.norms import norm_2inf
from app.trainer import (
    METRICS_COLUMNS,
    AbsoluteLoss,
    DenseEngine,
    HsrEngine,
    TrainConfig,
    band_probability,
    count_boundary_band,
    count_sign_flips,
    derive_hparams,
    gaussian_upper_tail,
    get_loss,
    make_engine,
    render_metrics_csv,
    strip_timings,
    train,
)


def _cfg(ds: Dataset, **kw) -> TrainConfig:
    base = dict(m=256, d=ds.d, n=ds.n, eps=0.1, seed=2, T=4, rho=ds.rho, log_every=0, workers=1)
    base.update(kw)
    return TrainConfig(**base)


# ---------------------------
# Hyper-parameters and loss
# ---------------------------
def test_derived_hparams():
    eta, T = derive_hparams(0.1, 1.0, 1024)
    assert eta == pytest.approx(0.025)
    assert T == 100
    assert derive_hparams(0.5, 2.0, 32)[1] == 16
    with pytest.raises(ConfigError):
        derive_hparams(1.0, 1.0, 8)
    with pytest.raises(ConfigError):
        derive_hparams(0.1, 0.0, 8)


def test_overrides_win():
    cfg = TrainConfig(eps=0.1, K=1.0, m=1024, eta=0.3, T=7)
    assert cfg.hparams() == (0.3, 7)


def test_rho_is_synced_into_the_adversary():
    cfg = TrainConfig(rho=0.05, adversary=AdversaryConfig(kind="random"))
    assert cfg.adversary.rho == 0.05


def test_absolute_loss():
    loss = get_loss("absolute")
    assert loss.eval(1.0, 0.25) == 0.75
    assert loss.subgrad(1.0, 0.25) == -1.0
    assert loss.subgrad(1.0, 2.0) == 1.0
    assert loss.subgrad(0.5, 0.5) == 0.0
    with pytest.raises(ConfigError):
        get_loss("hinge")


# ---------------------------
# Engines
# ---------------------------
def test_engines_agree_with_exact_active_sets(small_net, rng):
    params, _ = small_net
    hsr, dense = HsrEngine(params), DenseEngine(params)
    for _ in range(10):
        x = sample_sphere_cap(params.d, rng)
        assert hsr.query(x) == dense.query(x) == exact_active_set(params, x)
    ids = np.array([1, 2, 3])
    params.W[:, ids] += 0.3
    hsr.update(ids, params)
    dense.update(ids, params)
    x = sample_sphere_cap(params.d, rng)
    assert hsr.query(x) == dense.query(x) == exact_active_set(params, x)
    assert dense.stats()["queries"] == 11
    assert hsr.stats()["engine"] == "hsr"
    with pytest.raises(ConfigError):
        make_engine("kdtree", params)


# ---------------------------
# Training loop
# ---------------------------
def test_single_step_by_hand():
    x = np.array([math.sqrt(3) / 2, 0.5])
    ds = Dataset.from_arrays([x], [1.0])
    W = np.array([[0.1], [0.1]])
    W_given = W.copy()
    params = NetworkParams(m=1, d=2, a=np.array([1.0]), W=W, b=np.array([0.0]), tau=0.0)
    cfg = TrainConfig(m=1, d=2, n=1, eta=0.1, T=1, log_every=0, workers=1)
    result = train(cfg, ds, params=params)
    np.testing.assert_array_equal(result.params.W[:, 0], W_given[:, 0] + 0.1 * x)
    np.testing.assert_array_equal(params.W, W_given)  # the caller's params are not touched
    row = result.metrics[0]
    assert row.t == 1 and row.union_size == 1 and row.k_per_example == (1,)
    assert row.robust_loss == pytest.approx(1.0 - 0.1 * (x[0] + x[1]))


def test_zero_iterations_leave_weights_alone(small_dataset):
    cfg = _cfg(small_dataset, T=0)
    result = train(cfg, small_dataset)
    assert result.metrics == []
    np.testing.assert_array_equal(result.params.W, result.snapshot.W0)
    assert render_metrics_csv(result.metrics) == ",".join(METRICS_COLUMNS) + "\n"


def test_dataset_must_match_config(small_dataset):
    with pytest.raises(ConfigError):
        train(_cfg(small_dataset, d=small_dataset.d + 1), small_dataset)
    with pytest.raises(ConfigError):
        train(_cfg(small_dataset, n=small_dataset.n + 1), small_dataset)


@pytest.mark.parametrize("kind", ["null", "random", "pgd"])
def test_engines_produce_identical_runs(small_dataset, kind):
    adversary = AdversaryConfig(kind=kind, steps=3)
    runs = [
        train(_cfg(small_dataset, engine=engine, workers=workers, adversary=adversary), small_dataset)
        for engine, workers in (("hsr", 1), ("dense", 1), ("hsr", 3))
    ]
    for other in runs[1:]:
        np.testing.assert_array_equal(runs[0].params.W, other.params.W)
        assert [m.non_timing() for m in runs[0].metrics] == [m.non_timing() for m in other.metrics]
    assert strip_timings(render_metrics_csv(runs[0].metrics)) == strip_timings(render_metrics_csv(runs[1].metrics))


def test_only_active_columns_move(small_dataset):
    cfg = _cfg(small_dataset, tau=0.1, keep_snapshots=True)
    result = train(cfg, small_dataset)
    p = result.params
    np.testing.assert_array_equal(p.a, result.snapshot.a0)
    np.testing.assert_array_equal(p.b, result.snapshot.b0)
    assert len(result.snapshots) == cfg.T + 1
    for t, row in enumerate(result.metrics):
        before, after = result.snapshots[t], result.snapshots[t + 1]
        at_t = NetworkParams(p.m, p.d, p.a, before.copy(), p.b, p.tau)
        union = set()
        for x in small_dataset.xs:
            union |= set(exact_active_set(at_t, x))
        moved = set(np.flatnonzero(np.any(after != before, axis=0)).tolist())
        assert moved <= union
        assert row.union_size == len(union)
        assert row.d_max == norm_2inf(before - result.snapshot.W0)
    assert result.d_max == max(norm_2inf(W - result.snapshot.W0) for W in result.snapshots)


def test_training_reduces_loss_without_adversary(small_dataset):
    cfg = _cfg(small_dataset, m=512, eps=0.05, T=40, tau=0.0)
    result = train(cfg, small_dataset)
    assert result.metrics[-1].robust_loss < result.metrics[0].robust_loss


# ---------------------------
# Diagnostics
# ---------------------------
def test_sign_flips_and_band(small_net, rng):
    params, snapshot = small_net
    xs = np.stack([sample_sphere_cap(params.d, rng) for _ in range(4)])
    assert count_sign_flips(params, snapshot, xs) == 0
    params.W[...] = -params.W
    params_b = NetworkParams(params.m, params.d, params.a, params.W, -params.b, params.tau)
    assert count_sign_flips(params_b, snapshot, xs) > 0
    assert count_boundary_band(snapshot, xs[0], 0.0) <= count_boundary_band(snapshot, xs[0], 1.0) == params.m


def test_gaussian_references():
    assert gaussian_upper_tail(0.0, 1.0) == pytest.approx(0.5)
    assert gaussian_upper_tail(2.0, 1.0) == pytest.approx(0.02275, abs=1e-5)
    assert band_probability(0.0, 10.0, 64) == pytest.approx(1.0)
    assert gaussian_upper_tail(-40.0, 1.0) == 1.0
    assert 0.0 < gaussian_upper_tail(30.0, 1.0) < 1e-190
    assert band_probability(0.0, 0.0, 64) == 0.0


def test_gaussian_references_reject_bad_arguments():
    with pytest.raises(ConfigError):
        gaussian_upper_tail(0.0, 0.0)
    with pytest.raises(ConfigError):
        gaussian_upper_tail(0.0, -1.0)
    with pytest.raises(ConfigError):
        band_probability(0.0, -0.1, 64)


def test_loss_object_is_pluggable(small_dataset):
    cfg = _cfg(small_dataset, T=2)
    a = train(cfg, small_dataset)
    b = train(cfg, small_dataset, loss=AbsoluteLoss())
    np.testing.assert_array_equal(a.params.W, b.params.W)
