# Path from repo root: app/adversary/attacks.py
from __future__ import annotations

from collections.abc import Callable
from typing import TYPE_CHECKING

import numpy as np

from app.adversary.config import AdversaryConfig
from app.adversary.projection import project_to_domain, require_domain
from app.net.network import ActiveSet, NetworkParams, exact_active_set, forward_sparse, input_gradient


if TYPE_CHECKING:
    from app.trainer.loss import LossFn


ActiveFn = Callable[[np.ndarray], ActiveSet]
ValueAndGrad = Callable[[np.ndarray], tuple[float, np.ndarray]]
Attack = Callable[[NetworkParams, np.ndarray, float, np.random.Generator, "ActiveFn | None"], np.ndarray]


def projected_ascent(
    value_and_grad: ValueAndGrad,
    x,
    cfg: AdversaryConfig,
    *,
    start: np.ndarray | None = None,
) -> tuple[np.ndarray, float]:
    """
    Best-so-far projected gradient ascent inside B_2(x, rho) on the domain.

    Each step moves `step_size` along the normalized Euclidean gradient and projects
    back. Only strictly better iterates replace the incumbent, so the first maximizer
    encountered wins and the returned value is never below value(start). `start`
    (a feasible point of the ball, default x) seeds random restarts.
    """
    x0 = require_domain(x)
    best_x = x0.copy() if start is None else np.array(start, dtype=np.float64, copy=True)
    best_v, grad = value_and_grad(best_x)
    if cfg.rho == 0.0:
        return best_x, best_v
    cur = best_x
    for _ in range(cfg.steps):
        gn = float(np.linalg.norm(grad))
        if gn == 0.0 or not np.isfinite(gn):
            break
        cur = project_to_domain(cur + (cfg.step_size / gn) * grad, x0, cfg.rho, cfg.projection_rounds)
        value, grad = value_and_grad(cur)
        if value > best_v:
            best_x, best_v = cur, value
    return best_x, best_v


def pgd_attack(
    params: NetworkParams,
    x,
    y: float,
    cfg: AdversaryConfig,
    loss: LossFn,
    *,
    active_fn: ActiveFn | None = None,
) -> np.ndarray:
    """
    Approximate argmax over B_2(x, rho) of loss(y, f(x~)).

    The input gradient is (d loss / d f) * sum over the active set of a_r w_r; active
    sets come from `active_fn` (brute force when None), so every engine that reports
    exact active sets produces the same iterates.
    """
    get_active = active_fn or (lambda z: exact_active_set(params, z))

    def value_and_grad(z: np.ndarray) -> tuple[float, np.ndarray]:
        active = get_active(z)
        f = forward_sparse(params, z, active)
        return loss.eval(y, f), loss.subgrad(y, f) * input_gradient(params, z, active)

    best, _ = projected_ascent(value_and_grad, x, cfg)
    return best


def null_attack(x) -> np.ndarray:
    return np.array(x, dtype=np.float64, copy=True)


def random_attack(x, rho: float, seed: int | np.random.Generator, *, rounds: int = 8) -> np.ndarray:
    """project_to_domain(x + rho * u) for a uniformly random unit direction u."""
    x0 = require_domain(x)
    if rho == 0.0:
        return x0.copy()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = rng.standard_normal(x0.shape[0])
    u /= np.linalg.norm(u)
    return project_to_domain(x0 + rho * u, x0, rho, rounds)


def make_attack(cfg: AdversaryConfig, loss: LossFn) -> Attack:
    """Uniform call signature (params, x, y, rng, active_fn) for the trainer."""
    if cfg.kind == "null":
        return lambda params, x, y, rng, active_fn=None: null_attack(x)
    if cfg.kind == "random":
        return lambda params, x, y, rng, active_fn=None: random_attack(x, cfg.rho, rng, rounds=cfg.projection_rounds)
    return lambda params, x, y, rng, active_fn=None: pgd_attack(params, x, y, cfg, loss, active_fn=active_fn)
