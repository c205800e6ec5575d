# Path from repo root: app/services/bench/service.py
"""
Scaling benchmarks.

bench_hsr        index query cost vs m on Gaussian lifted points, tau tuned to a target
                 active fraction; every index answer is checked against the brute-force scan
bench_iteration  full training iterations with engine=hsr and engine=dense at each m

Both emit rows m,d,mean_query_ns,mean_visits,mean_reported,dense_ns (bench_iteration appends
its per-phase columns) and the least-squares slope of log(mean_visits) vs log(m).
"""
from __future__ import annotations

import logging
import math
import time
from typing import Any

import numpy as np
from pydantic import BaseModel, Field, field_validator
from scipy import stats

from app.core.csv_io import render_csv, write_csv
from app.core.errors import ConfigError, IndexCorruptionError, parse_model
from app.core.rng import rng_for
from app.data.dataset import generate_dataset, sample_sphere_cap
from app.hsr.index import HsrIndex
from app.hsr.points import brute_force_query, lift_query
from app.services.base import BaseService
from app.trainer.config import TrainConfig
from app.trainer.loop import TrainResult, train


log = logging.getLogger("services.bench")

BENCH_COLUMNS: tuple[str, ...] = ("m", "d", "mean_query_ns", "mean_visits", "mean_reported", "dense_ns")
ITERATION_COLUMNS: tuple[str, ...] = BENCH_COLUMNS + (
    "hsr_iter_ns",
    "dense_iter_ns",
    "speedup",
    "union_size",
    "t_attack_ns",
    "t_query_ns",
    "t_forward_ns",
    "t_backward_ns",
    "t_update_ns",
)


def tau_for_active_fraction(m: int, frac: float) -> float:
    """Threshold whose upper tail under N(0, 2/m) has mass `frac` (-inf for frac >= 1)."""
    if not 0.0 < frac <= 1.0:
        raise ConfigError(f"active fraction must lie in (0, 1], got {frac}")
    if frac >= 1.0:
        return -math.inf
    return float(stats.norm.isf(frac, loc=0.0, scale=math.sqrt(2.0 / m)))


def loglog_slope(ms, values) -> float:
    """Least-squares slope of log(values) vs log(ms); NaN with fewer than two distinct m."""
    ms = np.asarray(ms, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if np.unique(ms).size < 2 or np.any(values <= 0):
        return math.nan
    return float(stats.linregress(np.log(ms), np.log(values)).slope)


class BenchHsrRequest(BaseModel):
    model_config = {"extra": "forbid"}

    d: int = Field(6, ge=2)
    m_list: list[int] = Field(default_factory=lambda: [2**k for k in range(12, 18)])
    active_frac: float = Field(0.01, gt=0.0, le=1.0)
    trials: int = Field(64, ge=1)
    warmup: int = Field(2, ge=0)
    seed: int = 0
    out: str | None = None

    @field_validator("m_list")
    @classmethod
    def _positive(cls, v: list[int]) -> list[int]:
        if not v or any(m < 1 for m in v):
            raise ValueError("m_list must be non-empty with every m >= 1")
        return v


class BenchIterationRequest(BenchHsrRequest):
    n: int = Field(16, ge=1)
    trials: int = Field(3, ge=1)
    warmup: int = Field(0, ge=0)
    eps_sep: float = Field(0.3, gt=0.0)
    workers: int = Field(1, ge=1)

    @field_validator("active_frac")
    @classmethod
    def _nonnegative_tau(cls, v: float) -> float:
        if v > 0.5:
            raise ValueError("training needs tau >= 0, so active_frac must be <= 0.5")
        return v


def bench_hsr_point(m: int, d: int, frac: float, trials: int, warmup: int, seed: int) -> dict[str, Any]:
    """One m: lifted N(0, 1/m) points, `trials` cap queries timed against the index and the scan."""
    rng = rng_for(seed, "bench", m)
    std = 1.0 / math.sqrt(m)
    points = rng.normal(0.0, std, size=(m, d + 1))
    tau = tau_for_active_fraction(m, frac)
    index = HsrIndex.from_arrays(np.arange(m, dtype=np.int64), points)
    queries = [lift_query(sample_sphere_cap(d, rng)) for _ in range(warmup + trials)]

    for q in queries[:warmup]:
        index.query_with_stats(q, tau)
        brute_force_query(points, q, tau)

    q_ns, visits, reported, dense_ns = [], [], [], []
    for q in queries[warmup:]:
        t0 = time.perf_counter_ns()
        res = index.query_with_stats(q, tau)
        t1 = time.perf_counter_ns()
        expected = brute_force_query(points, q, tau)
        t2 = time.perf_counter_ns()
        if res.active != expected:
            raise IndexCorruptionError(f"index answer differs from the scan at m={m}")
        q_ns.append(t1 - t0)
        dense_ns.append(t2 - t1)
        visits.append(res.visits)
        reported.append(res.reported)

    return {
        "m": m,
        "d": d,
        "mean_query_ns": float(np.mean(q_ns)),
        "mean_visits": float(np.mean(visits)),
        "mean_reported": float(np.mean(reported)),
        "dense_ns": float(np.mean(dense_ns)),
        "nodes": index.stats()["nodes"],
    }


def _per_iteration(result: TrainResult) -> dict[str, float]:
    ms = result.metrics
    return {
        "iter_ns": float(np.mean([r.total_ns for r in ms])),
        "union_size": float(np.mean([r.union_size for r in ms])),
        "mean_k": float(np.mean([r.mean_k for r in ms])),
        "t_attack_ns": float(np.mean([r.t_attack_ns for r in ms])),
        "t_query_ns": float(np.mean([r.t_query_ns for r in ms])),
        "t_forward_ns": float(np.mean([r.t_forward_ns for r in ms])),
        "t_backward_ns": float(np.mean([r.t_backward_ns for r in ms])),
        "t_update_ns": float(np.mean([r.t_update_ns for r in ms])),
    }


def bench_iteration_point(req: BenchIterationRequest, m: int) -> dict[str, Any]:
    """One m: the same run under both engines; diagnostics off so only training work is timed."""
    ds = generate_dataset(req.n, req.d, req.eps_sep, 0.0, "sign", req.seed)
    tau = tau_for_active_fraction(m, req.active_frac)
    runs: dict[str, TrainResult] = {}
    for engine in ("hsr", "dense"):
        cfg = TrainConfig(
            m=m,
            d=req.d,
            n=req.n,
            tau=tau,
            seed=req.seed,
            T=req.trials,
            engine=engine,
            workers=req.workers,
            track_diagnostics=False,
            log_every=0,
        )
        runs[engine] = train(cfg, ds)
    if not np.array_equal(runs["hsr"].params.W, runs["dense"].params.W):
        raise IndexCorruptionError(f"engines diverged at m={m}")

    hsr, dense = _per_iteration(runs["hsr"]), _per_iteration(runs["dense"])
    engine_stats = runs["hsr"].engine_stats
    return {
        "m": m,
        "d": req.d,
        "mean_query_ns": hsr["t_query_ns"] / req.n,
        "mean_visits": engine_stats.get("mean_visits", 0.0),
        "mean_reported": hsr["mean_k"],
        "dense_ns": dense["t_query_ns"] / req.n,
        "hsr_iter_ns": hsr["iter_ns"],
        "dense_iter_ns": dense["iter_ns"],
        "speedup": dense["iter_ns"] / hsr["iter_ns"] if hsr["iter_ns"] > 0 else math.nan,
        "union_size": hsr["union_size"],
        "t_attack_ns": hsr["t_attack_ns"],
        "t_query_ns": hsr["t_query_ns"],
        "t_forward_ns": hsr["t_forward_ns"],
        "t_backward_ns": hsr["t_backward_ns"],
        "t_update_ns": hsr["t_update_ns"],
    }


def _emit(columns: tuple[str, ...], rows: list[dict[str, Any]], out: str | None) -> tuple[str, str | None]:
    table = [[r[c] for c in columns] for r in rows]
    path = str(write_csv(out, columns, table)) if out else None
    return render_csv(columns, table), path


class Service(BaseService):
    name = "bench"
    tasks = ["bench_hsr", "bench_iteration"]

    def bench_hsr(self, payload: dict[str, Any]) -> dict[str, Any]:
        req: BenchHsrRequest = parse_model(BenchHsrRequest, payload)
        rows = []
        for m in req.m_list:
            row = bench_hsr_point(m, req.d, req.active_frac, req.trials, req.warmup, req.seed)
            log.info(
                "bench-hsr m=%d visits=%.1f reported=%.1f query=%.0fns dense=%.0fns",
                m, row["mean_visits"], row["mean_reported"], row["mean_query_ns"], row["dense_ns"],
            )
            rows.append(row)
        slope = loglog_slope([r["m"] for r in rows], [r["mean_visits"] for r in rows])
        csv_text, out = _emit(BENCH_COLUMNS, rows, req.out)
        return {"ok": True, "rows": rows, "slope": slope, "csv": csv_text, "out": out}

    def bench_iteration(self, payload: dict[str, Any]) -> dict[str, Any]:
        req: BenchIterationRequest = parse_model(BenchIterationRequest, payload)
        rows = []
        for m in req.m_list:
            row = bench_iteration_point(req, m)
            log.info(
                "bench-iteration m=%d hsr=%.0fns dense=%.0fns speedup=%.2fx",
                m, row["hsr_iter_ns"], row["dense_iter_ns"], row["speedup"],
            )
            rows.append(row)
        slope = loglog_slope([r["m"] for r in rows], [r["mean_visits"] for r in rows])
        csv_text, out = _emit(ITERATION_COLUMNS, rows, req.out)
        return {"ok": True, "rows": rows, "slope": slope, "csv": csv_text, "out": out}
