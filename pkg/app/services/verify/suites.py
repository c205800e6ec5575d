# Path from repo root: app/services/verify/suites.py
"""
Acceptance suites. Each suite returns rows (suite, check, value, bound, passed); a run
passes iff every row passes.

Sizes come from a Profile: `full` is the acceptance scale, `quick` keeps the same checks
small enough for the default test run.
"""
from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from app.adversary.attacks import projected_ascent, random_attack
from app.adversary.config import AdversaryConfig
from app.core.errors import IndexCorruptionError, UnknownTaskError
from app.core.rng import rng_for
from app.data.dataset import generate_dataset, sample_sphere_cap
from app.hsr.config import IndexConfig
from app.hsr.index import HsrIndex
from app.hsr.points import LiftedPoint, brute_force_query
from app.net.network import (
    ActiveSet,
    coupling_gap,
    dense_grad_loss,
    exact_active_set,
    forward_dense,
    grad_loss_sparse,
    init_params,
    perturb_columns,
    preactivations,
)
from app.polyapprox.chebyshev import chebyshev_coeffs, chebyshev_eval, coefficient_bound
from app.polyapprox.robust_fit import robust_fit_eval, robust_fit_eval_with_grad
from app.polyapprox.sign import sign_poly_degree, sign_poly_eval
from app.polyapprox.step import StepSpec, step_poly_eval
from app.services.bench.service import BenchIterationRequest, bench_hsr_point, bench_iteration_point, loglog_slope
from app.trainer.config import TrainConfig
from app.trainer.diagnostics import (
    active_count_at_init,
    band_probability,
    band_width,
    count_boundary_band,
    gaussian_upper_tail,
    init_preactivation_var,
)
from app.trainer.loop import train
from app.trainer.loss import AbsoluteLoss


log = logging.getLogger("verify")

VERIFY_COLUMNS: tuple[str, ...] = ("suite", "check", "value", "bound", "pass")


class Check(NamedTuple):
    suite: str
    check: str
    value: float
    bound: float
    passed: bool

    def row(self) -> list:
        return [self.suite, self.check, float(self.value), float(self.bound), bool(self.passed)]


@dataclass(frozen=True)
class Profile:
    name: str
    # hsr
    hsr_instances: int
    hsr_max_m: int
    hsr_ops: int
    # activation
    act_m: int
    act_d: int
    act_points: int
    # coupling
    coupling_ms: tuple[int, ...]
    coupling_seeds: int
    coupling_points: int
    # engine equivalence
    eq_m: int
    eq_T: int
    eq_seeds: int
    # gradient
    grad_instances: int
    grad_max_m: int
    # robust fit
    fit_restarts: int
    fit_steps: int
    # convergence
    conv_m: int
    conv_T: int
    # scaling
    scale_ms: tuple[int, ...]
    scale_trials: int
    scale_iter_T: int


PROFILES: dict[str, Profile] = {
    "full": Profile(
        name="full",
        hsr_instances=200,
        hsr_max_m=4096,
        hsr_ops=50,
        act_m=8192,
        act_d=16,
        act_points=32,
        coupling_ms=(2**10, 2**12, 2**14),
        coupling_seeds=5,
        coupling_points=256,
        eq_m=4096,
        eq_T=50,
        eq_seeds=3,
        grad_instances=100,
        grad_max_m=64,
        fit_restarts=16,
        fit_steps=10,
        conv_m=4096,
        conv_T=200,
        scale_ms=tuple(2**k for k in range(12, 18)),
        scale_trials=32,
        scale_iter_T=2,
    ),
    "quick": Profile(
        name="quick",
        hsr_instances=20,
        hsr_max_m=512,
        hsr_ops=20,
        act_m=8192,
        act_d=16,
        act_points=32,
        coupling_ms=(2**8, 2**10, 2**12),
        coupling_seeds=3,
        coupling_points=64,
        eq_m=512,
        eq_T=8,
        eq_seeds=2,
        grad_instances=20,
        grad_max_m=32,
        fit_restarts=4,
        fit_steps=5,
        conv_m=512,
        conv_T=80,
        scale_ms=(2**10, 2**11, 2**12, 2**13),
        scale_trials=16,
        scale_iter_T=1,
    ),
}

SIGN_CASES: tuple[tuple[float, float], ...] = ((0.3, 0.1), (0.2, 0.05), (0.1, 0.02))
SIGN_GRID = 10_000


def _check(suite: str, name: str, value: float, bound: float, passed: bool) -> Check:
    c = Check(suite, name, float(value), float(bound), bool(passed))
    log.log(logging.INFO if c.passed else logging.WARNING, "%s %s value=%.6g bound=%.6g pass=%s", *c)
    return c


# ---------------------------
# hsr
# ---------------------------
def suite_hsr(p: Profile, seed: int) -> list[Check]:
    """Index answers vs the linear scan under interleaved insert/remove."""
    t0 = time.perf_counter()
    rng = rng_for(seed, "verify", 1)
    mismatches = queries = broken = 0
    for inst in range(p.hsr_instances):
        d = int(rng.integers(2, 11))
        m = int(rng.integers(1, p.hsr_max_m + 1))
        cfg = IndexConfig(leaf_size=int(rng.integers(1, 33)), seed=inst)
        pts = rng.standard_normal((m, d + 1))
        index = HsrIndex.from_arrays(np.arange(m, dtype=np.int64), pts, config=cfg)
        live = {i: pts[i] for i in range(m)}
        next_id = m
        for _ in range(p.hsr_ops):
            if live and rng.random() < 0.5:
                keys = list(live)
                pid = keys[int(rng.integers(0, len(keys)))]
                index.remove(pid)
                del live[pid]
            else:
                p_new = rng.standard_normal(d + 1)
                index.insert(LiftedPoint(next_id, p_new))
                live[next_id] = p_new
                next_id += 1
            q = rng.standard_normal(d + 1)
            tau = float(rng.normal()) * float(np.linalg.norm(q))
            got = index.query(q, tau)
            if live:
                ids = np.fromiter(live, dtype=np.int64, count=len(live))
                want = brute_force_query(np.stack(list(live.values())), q, tau, ids=ids)
            else:
                want = ActiveSet.empty()
            queries += 1
            mismatches += int(got != want)
        try:
            index.check_invariants()
        except IndexCorruptionError as e:
            log.warning("instance %d: %s", inst, e)
            broken += 1

    empty = HsrIndex(dim=4)
    empty_reported = len(empty.query(np.ones(4), 0.0))
    elapsed = time.perf_counter() - t0
    return [
        _check("hsr", "queries", queries, p.hsr_instances * p.hsr_ops, queries == p.hsr_instances * p.hsr_ops),
        _check("hsr", "mismatches", mismatches, 0, mismatches == 0),
        _check("hsr", "invariant_failures", broken, 0, broken == 0),
        _check("hsr", "empty_index_reported", empty_reported, 0, empty_reported == 0),
        _check("hsr", "runtime_s", elapsed, 60.0, elapsed < 60.0),
    ]


# ---------------------------
# poly
# ---------------------------
def suite_poly(p: Profile, seed: int) -> list[Check]:
    """Sign and step polynomial contracts, Chebyshev coefficient bound and identity."""
    out: list[Check] = []
    for eta, eps1 in SIGN_CASES:
        t0 = time.perf_counter()
        k = sign_poly_degree(eta, eps1)
        half = SIGN_GRID // 2
        grid = np.concatenate([np.linspace(-1.0, -eta, half), np.linspace(eta, 1.0, SIGN_GRID - half)])
        err = float(np.max(np.abs(sign_poly_eval(grid, k) - np.sign(grid))))
        elapsed = time.perf_counter() - t0
        tag = f"eta={eta};eps1={eps1};k={k}"
        out.append(_check("poly", f"sign_contract[{tag}]", err, eps1 / 2 + 1e-9, err <= eps1 / 2 + 1e-9))
        out.append(_check("poly", f"sign_time_s[{tag}]", elapsed, 1.0, elapsed < 1.0))

    rng = rng_for(seed, "verify", 2)
    worst_low = worst_high = 0.0
    all_ok = True
    for _ in range(10):
        eps_sep = float(rng.uniform(0.8, 1.7))
        spec = StepSpec(
            eps1=float(rng.uniform(0.01, 0.2)),
            eps_sep=eps_sep,
            rho=float(rng.uniform(0.0, 0.3)) * eps_sep,
        )
        low = np.linspace(-1.0, spec.low_end, 2000, endpoint=False)
        high = np.linspace(spec.high_start, 1.0, 2000)
        e_low = float(np.max(np.abs(step_poly_eval(low, spec))))
        e_high = float(np.max(np.abs(step_poly_eval(high, spec) - 1.0)))
        worst_low = max(worst_low, e_low / spec.eps1)
        worst_high = max(worst_high, e_high / spec.eps1)
        all_ok &= e_low <= spec.eps1 and e_high <= spec.eps1
    out.append(_check("poly", "step_low_error_over_eps1", worst_low, 1.0, worst_low <= 1.0))
    out.append(_check("poly", "step_high_error_over_eps1", worst_high, 1.0, worst_high <= 1.0))
    out.append(_check("poly", "step_contract_all_specs", float(all_ok), 1.0, all_ok))

    violations = sum(max(abs(c) for c in chebyshev_coeffs(k)) > coefficient_bound(k) for k in range(21))
    out.append(_check("poly", "chebyshev_coeff_bound_k<=20", violations, 0, violations == 0))
    theta = np.linspace(0.0, math.pi, 1001)
    cos_err = max(float(np.max(np.abs(chebyshev_eval(k, np.cos(theta)) - np.cos(k * theta)))) for k in range(31))
    out.append(_check("poly", "chebyshev_cos_identity_k<=30", cos_err, 1e-9, cos_err <= 1e-9))
    return out


# ---------------------------
# activation
# ---------------------------
def suite_activation(p: Profile, seed: int) -> list[Check]:
    """
    Active fraction at tau = 2 sqrt(2/m) and the boundary-band count at K m^(-3/5).

    Every sampled x gets its own initialization so the m * points indicators are
    independent and the 3-standard-error bounds apply as stated.
    """
    m, d, npts = p.act_m, p.act_d, p.act_points
    var = init_preactivation_var(m)
    tau = 2.0 * math.sqrt(var)
    band = band_width(1.0, m)
    rng = rng_for(seed, "verify", 3)
    active, in_band = [], []
    for j in range(npts):
        _, snap = init_params(m, d, tau, seed * 1_000_003 + j)
        x = sample_sphere_cap(d, rng)
        active.append(int(active_count_at_init(snap, [x])[0]))
        in_band.append(count_boundary_band(snap, x, band))

    p_act = gaussian_upper_tail(tau, var)
    frac = sum(active) / (npts * m)
    se_act = math.sqrt(p_act * (1.0 - p_act) / (npts * m))
    p_band = band_probability(tau, band, m)
    band_frac = sum(in_band) / (npts * m)
    se_band = math.sqrt(p_band * (1.0 - p_band) / (npts * m))
    return [
        _check("activation", "tail_probability", p_act, 0.02275, abs(p_act - 0.02275) < 1e-4),
        _check("activation", "active_fraction_deviation", abs(frac - p_act), 3 * se_act, abs(frac - p_act) <= 3 * se_act),
        _check("activation", "band_fraction_deviation", abs(band_frac - p_band), 3 * se_band,
               abs(band_frac - p_band) <= 3 * se_band),
    ]


# ---------------------------
# coupling
# ---------------------------
def suite_coupling(p: Profile, seed: int) -> list[Check]:
    """Median over seeds of sup_x |f - g| after a random ||Delta W||_{2,inf} = K m^(-3/5) step."""
    K, d = 1.0, 8
    out: list[Check] = []
    medians: list[float] = []
    for m in p.coupling_ms:
        gaps = []
        for s in range(p.coupling_seeds):
            params, snap = init_params(m, d, 0.0, seed * 7919 + s)
            rng = rng_for(seed, "verify", 4, m, s)
            perturb_columns(params, snap, K * float(m) ** -0.6, rng)
            xs = np.stack([sample_sphere_cap(d, rng) for _ in range(p.coupling_points)])
            gaps.append(coupling_gap(params, snap, xs))
        med = float(np.median(gaps))
        ref = K * K * float(m) ** -0.1
        ok = not medians or med <= medians[-1]
        out.append(_check("coupling", f"median_gap[m={m}]", med, medians[-1] if medians else ref, ok))
        medians.append(med)
    increases = sum(b > a for a, b in zip(medians, medians[1:]))
    out.append(_check("coupling", "non_increasing", increases, 0, increases == 0))
    return out


# ---------------------------
# engine equivalence
# ---------------------------
def _equivalence_config(p: Profile, s: int, engine: str, workers: int) -> TrainConfig:
    return TrainConfig(
        m=p.eq_m,
        d=8,
        n=8,
        tau=0.0,
        rho=0.05,
        eps=0.1,
        seed=s,
        T=p.eq_T,
        adversary=AdversaryConfig(kind="pgd", rho=0.05, steps=5),
        engine=engine,
        workers=workers,
        log_every=0,
    )


def suite_engine_equivalence(p: Profile, seed: int) -> list[Check]:
    """hsr vs dense: bit-identical final W and identical non-timing metrics."""
    t0 = time.perf_counter()
    out: list[Check] = []
    for s in range(seed, seed + p.eq_seeds):
        ds = generate_dataset(8, 8, 0.5, 0.05, "sign", s)
        hsr = train(_equivalence_config(p, s, "hsr", 1), ds)
        dense = train(_equivalence_config(p, s, "dense", 1), ds)
        diff = float(np.max(np.abs(hsr.params.W - dense.params.W)))
        same = [a.non_timing() for a in hsr.metrics] == [b.non_timing() for b in dense.metrics]
        out.append(_check("engine-equivalence", f"max_abs_diff_W[seed={s}]", diff, 0.0, diff == 0.0))
        out.append(_check("engine-equivalence", f"metrics_equal[seed={s}]", float(same), 1.0, same))
        if s == seed:
            threaded = train(_equivalence_config(p, s, "hsr", 4), ds)
            wdiff = float(np.max(np.abs(threaded.params.W - hsr.params.W)))
            out.append(_check("engine-equivalence", f"workers_max_abs_diff_W[seed={s}]", wdiff, 0.0, wdiff == 0.0))
    elapsed = time.perf_counter() - t0
    out.append(_check("engine-equivalence", "runtime_s", elapsed, 120.0, elapsed < 120.0))
    return out


# ---------------------------
# gradient
# ---------------------------
def _far_from_boundaries(params, x, y: float, margin: float) -> bool:
    z = preactivations(params, x)
    return bool(np.all(np.abs(z - params.tau) >= margin)) and abs(forward_dense(params, x) - y) >= margin


def suite_gradient(p: Profile, seed: int) -> list[Check]:
    """Sparse gradient vs the dense analytic gradient (exact) and central differences."""
    loss = AbsoluteLoss()
    rng = rng_for(seed, "verify", 5)
    h, margin = 1e-6, 1e-3
    inexact = 0
    worst_rel = 0.0
    for inst in range(p.grad_instances):
        for attempt in range(100):
            m = int(rng.integers(1, p.grad_max_m + 1))
            d = int(rng.integers(2, 11))
            params, _ = init_params(m, d, float(rng.uniform(0.0, 0.05)), seed * 100_003 + inst * 101 + attempt)
            x = sample_sphere_cap(d, rng)
            y = float(rng.uniform(-1.0, 1.0))
            if _far_from_boundaries(params, x, y, margin):
                break
        active = exact_active_set(params, x)
        sparse = grad_loss_sparse(params, x, y, active, loss).to_dense(m)
        dense = dense_grad_loss(params, x, y, loss)
        inexact += int(not np.array_equal(sparse, dense))

        fd = np.zeros_like(dense)
        W = params.W
        for j in range(d):
            for r in range(m):
                orig = W[j, r]
                W[j, r] = orig + h
                up = loss.eval(y, forward_dense(params, x))
                W[j, r] = orig - h
                down = loss.eval(y, forward_dense(params, x))
                W[j, r] = orig
                fd[j, r] = (up - down) / (2.0 * h)
        scale = float(np.max(np.abs(dense)))
        rel = float(np.max(np.abs(fd - dense))) / scale if scale > 0 else float(np.max(np.abs(fd)))
        worst_rel = max(worst_rel, rel)
    return [
        _check("gradient", "sparse_vs_dense_mismatches", inexact, 0, inexact == 0),
        _check("gradient", "finite_difference_rel_error", worst_rel, 1e-5, worst_rel <= 1e-5),
    ]


# ---------------------------
# robust fit
# ---------------------------
def suite_robust_fit(p: Profile, seed: int) -> list[Check]:
    """|f*(x~_j) - y_j| <= eps/3 for training points and PGD-perturbed neighbours."""
    eps, rho = 0.3, 0.1
    ds = generate_dataset(4, 8, 0.9, rho, "smooth", seed)
    cfg = AdversaryConfig(kind="pgd", rho=rho, steps=p.fit_steps, step_size=0.02)
    rng = rng_for(seed, "verify", 6)
    bound = eps / 3.0 + 1e-6
    out: list[Check] = []
    for j in range(ds.n):
        xj, yj = ds.xs[j], float(ds.ys[j])

        def value_and_grad(z: np.ndarray, _y: float = yj) -> tuple[float, np.ndarray]:
            v, g = robust_fit_eval_with_grad(ds, z, eps)
            return abs(v - _y), (1.0 if v >= _y else -1.0) * g

        candidates = [xj]
        for _ in range(p.fit_restarts):
            start = random_attack(xj, rho, rng, rounds=cfg.projection_rounds)
            best, _ = projected_ascent(value_and_grad, xj, cfg, start=start)
            candidates.append(best)
        worst = max(abs(robust_fit_eval(ds, z, eps, high_precision=True) - yj) for z in candidates)
        out.append(_check("robust-fit", f"max_error[j={j}]", worst, bound, worst <= bound))
    return out


# ---------------------------
# convergence
# ---------------------------
def suite_convergence(p: Profile, seed: int) -> list[Check]:
    """Robust loss over the last 10 iterations at most half of the first iteration's."""
    ds = generate_dataset(8, 8, 0.5, 0.05, "smooth", seed)
    cfg = TrainConfig(
        m=p.conv_m,
        d=8,
        n=8,
        tau=0.0,
        rho=0.05,
        eps=0.02,
        seed=seed,
        T=p.conv_T,
        adversary=AdversaryConfig(kind="pgd", rho=0.05, steps=5),
        track_diagnostics=False,
        log_every=0,
    )
    result = train(cfg, ds)
    first = result.metrics[0].robust_loss
    last = float(np.mean([r.robust_loss for r in result.metrics[-10:]]))
    return [
        _check("convergence", "first_robust_loss", first, 0.0, first >= 0.0),
        _check("convergence", "last10_mean_robust_loss", last, 0.5 * first, last <= 0.5 * first),
    ]


# ---------------------------
# scaling
# ---------------------------
def suite_scaling(p: Profile, seed: int) -> list[Check]:
    """Sublinear query visits in m and a per-iteration speedup of hsr over dense at the largest m."""
    rows = [bench_hsr_point(m, 6, 0.01, p.scale_trials, 2, seed) for m in p.scale_ms]
    slope = loglog_slope([r["m"] for r in rows], [r["mean_visits"] for r in rows])
    req = BenchIterationRequest(d=6, n=16, m_list=[p.scale_ms[-1]], active_frac=0.01, trials=p.scale_iter_T, seed=seed)
    it = bench_iteration_point(req, p.scale_ms[-1])
    if it["speedup"] < 3.0:
        log.warning("per-iteration speedup %.2fx at m=%d is below the 3x target", it["speedup"], it["m"])
    return [
        _check("scaling", "visits_loglog_slope", slope, 1.0, slope < 1.0),
        _check("scaling", f"iteration_speedup[m={it['m']}]", it["speedup"], 1.0, it["speedup"] > 1.0),
    ]


SuiteFn = Callable[[Profile, int], list[Check]]

SUITES: dict[str, SuiteFn] = {
    "hsr": suite_hsr,
    "poly": suite_poly,
    "coupling": suite_coupling,
    "activation": suite_activation,
    "engine-equivalence": suite_engine_equivalence,
    "gradient": suite_gradient,
    "robust-fit": suite_robust_fit,
    "convergence": suite_convergence,
    "scaling": suite_scaling,
}


def suite_names() -> list[str]:
    return [*SUITES, "all"]


def run_suite(name: str, profile: str = "full", seed: int = 0) -> list[Check]:
    if profile not in PROFILES:
        raise UnknownTaskError(f"unknown profile {profile!r}; available: {sorted(PROFILES)}")
    prof = PROFILES[profile]
    if name == "all":
        return [c for fn in SUITES.values() for c in fn(prof, seed)]
    try:
        fn = SUITES[name]
    except KeyError:
        raise UnknownTaskError(f"unknown suite {name!r}; available: {suite_names()}") from None
    return fn(prof, seed)
