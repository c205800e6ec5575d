# Path from repo root: app/polyapprox/robust_fit.py
"""
Robust-fit target f*(x) = sum_i y_i q(<x_i, x>).

With q built for eps1 = eps / (3n) from the dataset's separation and budget,
|f*(x~_j) - y_j| <= eps / 3 for every x~_j within rho of a training point x_j.
"""
from __future__ import annotations

import math
from decimal import Decimal, localcontext

import numpy as np

from app.adversary.projection import CAP_RADIUS
from app.core.config import get_settings
from app.core.errors import ConfigError, SeparabilityError, check_dim
from app.data.dataset import Dataset
from app.polyapprox.step import StepSpec, step_poly_eval, step_poly_eval_decimal, step_poly_eval_with_grad


def robust_fit_spec(ds: Dataset, eps: float) -> StepSpec:
    """StepSpec with eps1 = eps / (3n) and the dataset's (eps_sep, rho)."""
    if not 0.0 < eps < 1.0:
        raise ConfigError(f"eps must lie in (0, 1), got {eps}")
    if not ds.gamma > 0.0:
        raise SeparabilityError(
            f"dataset is not separable at rho={ds.rho}: gamma={ds.gamma:.6g} (eps_sep={ds.eps_sep:.6g})"
        )
    # no two cap points are further apart than sqrt(3); a lone point carries eps_sep = inf
    eps_sep = min(ds.eps_sep, 2.0 * CAP_RADIUS)
    return StepSpec(eps1=eps / (3.0 * ds.n), eps_sep=eps_sep, rho=ds.rho)


def _inner(ds: Dataset, x) -> tuple[np.ndarray, np.ndarray]:
    xv = np.asarray(x, dtype=np.float64).reshape(-1)
    check_dim("x", xv.shape[0], ds.d)
    return xv, ds.xs @ xv


def robust_fit_eval(
    ds: Dataset,
    x,
    eps: float,
    *,
    high_precision: bool | None = None,
    digits: int | None = None,
) -> float:
    spec = robust_fit_spec(ds, eps)
    settings = get_settings()
    if high_precision is None:
        high_precision = settings.POLY_HIGH_PRECISION
    if high_precision:
        return _robust_fit_decimal(ds, x, spec, digits or settings.POLY_DECIMAL_DIGITS)
    _, z = _inner(ds, x)
    return math.fsum((ds.ys * step_poly_eval(z, spec)).tolist())


def robust_fit_eval_with_grad(ds: Dataset, x, eps: float) -> tuple[float, np.ndarray]:
    """(f*(x), grad f*(x)) with grad = sum_i y_i q'(<x_i, x>) x_i."""
    spec = robust_fit_spec(ds, eps)
    _, z = _inner(ds, x)
    q, dq = step_poly_eval_with_grad(z, spec)
    value = math.fsum((ds.ys * q).tolist())
    grad = (ds.ys * dq) @ ds.xs
    return value, grad


def _robust_fit_decimal(ds: Dataset, x, spec: StepSpec, digits: int) -> float:
    xv, _ = _inner(ds, x)
    with localcontext() as ctx:
        ctx.prec = digits
        xd = [Decimal(float(v)) for v in xv]
        total = Decimal(0)
        for xi, yi in zip(ds.xs, ds.ys):
            z = sum((Decimal(float(a)) * b for a, b in zip(xi, xd)), Decimal(0))
            total += Decimal(float(yi)) * step_poly_eval_decimal(z, spec, digits)
        return float(total)


def degree_diagnostics(gamma: float, n: int, eps: float, eps1: float, spec: StepSpec | None = None) -> dict:
    """
    Both degree formulas on record, neither enforced:
      M_fit  = 24 / gamma * ln(48 n / eps)
      M_step = 24 * ln(16 / eps1) / gamma
    plus the sign-polynomial degree k actually used when a spec is given.
    """
    if not gamma > 0.0:
        raise SeparabilityError(f"gamma must be > 0, got {gamma}")
    out = {
        "M_fit": 24.0 / gamma * math.log(48.0 * n / eps),
        "M_step": 24.0 * math.log(16.0 / eps1) / gamma,
    }
    if spec is not None:
        out["k"] = spec.k
    return out
