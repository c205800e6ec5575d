# Path from repo root: app/trainer/loop.py
"""
Sublinear adversarial training loop.

Per iteration t (weights W_t):
  1. attack   x~_i = A(W_t, x_i, y_i)                      (read-only, may run on workers)
  2. query    Q_{t,i} = active set of x~_i from the engine   (read-only, may run on workers)
  3. forward  f(x~_i) over Q_{t,i} only
  4. backward per-example sparse gradients combined in ascending i over Q_t = U_i Q_{t,i}
  5. update   W[:, Q_t] -= eta * G, then the engine moves the updated points
Columns outside Q_t, a and b are never written.
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from app.adversary.attacks import make_attack
from app.core.errors import ConfigError
from app.core.rng import rng_for
from app.data.dataset import Dataset
from app.net.network import ActiveSet, InitialSnapshot, NetworkParams, forward_sparse, grad_loss_sparse, init_params
from app.net.norms import norm_2inf
from app.trainer.config import TrainConfig
from app.trainer.diagnostics import band_width, count_boundary_band, count_sign_flips
from app.trainer.engines import make_engine
from app.trainer.loss import LossFn, get_loss
from app.trainer.metrics import IterationMetrics


log = logging.getLogger("trainer.loop")


@dataclass
class TrainResult:
    params: NetworkParams
    snapshot: InitialSnapshot
    metrics: list[IterationMetrics]
    eta: float
    T: int
    d_max: float = 0.0
    snapshots: list[np.ndarray] = field(default_factory=list)
    engine_stats: dict = field(default_factory=dict)

    @property
    def final_W(self) -> np.ndarray:
        return self.params.W


def _check_dataset(cfg: TrainConfig, ds: Dataset) -> None:
    if ds.d != cfg.d:
        raise ConfigError(f"dataset has d={ds.d} but the config says d={cfg.d}")
    if ds.n != cfg.n:
        raise ConfigError(f"dataset has n={ds.n} but the config says n={cfg.n}")


def _check_params(cfg: TrainConfig, params: NetworkParams) -> None:
    if (params.m, params.d) != (cfg.m, cfg.d):
        raise ConfigError(f"initial params are {params.m}x{params.d}, config wants m={cfg.m}, d={cfg.d}")
    if params.tau != cfg.tau:
        raise ConfigError(f"initial params use tau={params.tau}, config wants tau={cfg.tau}")


def train(
    cfg: TrainConfig,
    ds: Dataset,
    *,
    loss: LossFn | None = None,
    params: NetworkParams | None = None,
) -> TrainResult:
    """
    Run exactly T iterations. `params` replaces the seeded initialization (a copy is trained).

    Results depend only on (cfg minus engine/workers, ds): every random draw comes from a
    named stream keyed by (seed, t, i).

    Args:
        cfg (TrainConfig): Width, threshold, seed, engine, adversary and schedule.
        ds (Dataset): Training points; n and d must match `cfg`.
        loss (LossFn | None): Loss object. Defaults to the one named by `cfg.loss`.
        params (NetworkParams | None): Starting weights; must be m x d with `cfg.tau`.

    Returns:
        TrainResult: Final params, the initial snapshot, per-iteration metrics, eta and T.

    Raises:
        ConfigError: `ds` or `params` disagree with `cfg`.
        IndexCorruptionError: The hsr engine's answer failed a consistency check.
    """
    _check_dataset(cfg, ds)
    loss = loss or get_loss(cfg.loss)
    eta, T = cfg.hparams()

    if params is None:
        params, snapshot = init_params(cfg.m, cfg.d, cfg.tau, cfg.seed)
    else:
        _check_params(cfg, params)
        params = params.copy()
        snapshot = InitialSnapshot.of(params)

    result = TrainResult(params=params, snapshot=snapshot, metrics=[], eta=eta, T=T)
    if cfg.keep_snapshots:
        result.snapshots.append(params.W.copy())
    if T == 0:
        return result

    engine = make_engine(cfg.engine, params, cfg.index)
    attack = make_attack(cfg.adversary, loss)
    active_fn = engine.query if cfg.adversary_uses_index else None
    band = band_width(cfg.K, cfg.m)
    n = ds.n

    log.info(
        "training m=%d d=%d n=%d T=%d eta=%.6g engine=%s adversary=%s workers=%d",
        cfg.m, cfg.d, n, T, eta, engine.name, cfg.adversary.kind, cfg.workers,
    )

    executor = ThreadPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        for t in range(T):

            def _attack(i: int, _t: int = t) -> np.ndarray:
                rng = rng_for(cfg.seed, "adversary", _t, i)
                return attack(params, ds.xs[i], float(ds.ys[i]), rng, active_fn)

            # 1. attack
            t0 = time.perf_counter_ns()
            if executor is None:
                xt = [_attack(i) for i in range(n)]
            else:
                xt = list(executor.map(_attack, range(n)))
            t1 = time.perf_counter_ns()

            # 2. query
            if executor is None:
                actives: list[ActiveSet] = [engine.query(x) for x in xt]
            else:
                actives = list(executor.map(engine.query, xt))
            t2 = time.perf_counter_ns()

            # 3. forward
            preds = [forward_sparse(params, xt[i], actives[i]) for i in range(n)]
            robust_loss = math.fsum(loss.eval(float(ds.ys[i]), preds[i]) for i in range(n)) / n
            t3 = time.perf_counter_ns()

            # 4. backward
            union = np.unique(np.concatenate([a.indices for a in actives]))
            G = np.zeros((cfg.d, union.size), dtype=np.float64)
            for i in range(n):
                sg = grad_loss_sparse(params, xt[i], float(ds.ys[i]), actives[i], loss, f=preds[i])
                if len(sg):
                    G[:, np.searchsorted(union, sg.indices)] += sg.columns
            G /= n
            t4 = time.perf_counter_ns()

            # diagnostics at W_t, before the step
            if cfg.track_diagnostics:
                flips = count_sign_flips(params, snapshot, ds.xs)
                in_band = sum(count_boundary_band(snapshot, x, band) for x in xt)
            else:
                flips = in_band = 0
            d_now = norm_2inf(params.W - snapshot.W0)
            result.d_max = max(result.d_max, d_now)

            # 5. update
            t5 = time.perf_counter_ns()
            if union.size:
                params.W[:, union] -= eta * G
                engine.update(union, params)
            t6 = time.perf_counter_ns()

            row = IterationMetrics(
                t=t + 1,
                robust_loss=robust_loss,
                k_per_example=tuple(len(a) for a in actives),
                union_size=int(union.size),
                flips=flips,
                boundary_band=in_band,
                d_max=d_now,
                t_attack_ns=t1 - t0,
                t_query_ns=t2 - t1,
                t_forward_ns=t3 - t2,
                t_backward_ns=t4 - t3,
                t_update_ns=t6 - t5,
            )
            result.metrics.append(row)
            if cfg.keep_snapshots:
                result.snapshots.append(params.W.copy())

            if cfg.log_every and ((t + 1) % cfg.log_every == 0 or t + 1 == T):
                log.info(
                    "t=%d/%d loss=%.6g union=%d mean_k=%.1f d_max=%.3g ns[attack=%d query=%d fwd=%d bwd=%d upd=%d]",
                    t + 1, T, robust_loss, row.union_size, row.mean_k, d_now,
                    row.t_attack_ns, row.t_query_ns, row.t_forward_ns, row.t_backward_ns, row.t_update_ns,
                )
    finally:
        if executor is not None:
            executor.shutdown(wait=True)

    result.d_max = max(result.d_max, norm_2inf(params.W - snapshot.W0))
    result.engine_stats = engine.stats()
    return result
