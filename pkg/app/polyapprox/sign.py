# Path from repo root: app/polyapprox/sign.py
"""
Sign polynomial

    p_k(x) = x * sum_{i=0}^{k} (1 - x^2)^i * prod_{j=1}^{i} (2j - 1) / (2j)

evaluated term by term: term_0 = 1, term_i = term_{i-1} * (1 - x^2) * (2i - 1) / (2i).
On [-1, 1] every term lies in [0, 1]. The monomial expansion is never formed.
"""
from __future__ import annotations

import math
from decimal import Decimal, localcontext

import numpy as np

from app.core.errors import ConfigError


def sign_poly_degree(eta: float, eps1: float) -> int:
    """k = ceil(ln(2 / eps1) / eta^2): |p_k - sgn| <= eps1 / 2 on [-1, -eta] U [eta, 1]."""
    if not 0.0 < eta < 1.0:
        raise ConfigError(f"eta must lie in (0, 1), got {eta}")
    if not 0.0 < eps1 < 1.0:
        raise ConfigError(f"eps1 must lie in (0, 1), got {eps1}")
    return int(math.ceil(math.log(2.0 / eps1) / (eta * eta)))


def _check_k(k: int) -> None:
    if k < 0:
        raise ConfigError(f"k must be >= 0, got {k}")


def sign_poly_eval(x, k: int):
    """p_k at x (scalar or array)."""
    _check_k(k)
    scalar = np.ndim(x) == 0
    xv = np.asarray(x, dtype=np.float64)
    w = 1.0 - xv * xv
    term = np.ones_like(xv)
    total = np.ones_like(xv)
    for i in range(1, k + 1):
        term = term * w * ((2 * i - 1) / (2 * i))
        total = total + term
    out = xv * total
    return float(out) if scalar else out


def sign_poly_eval_with_grad(x, k: int):
    """(p_k(x), p_k'(x)); p' = S + x * dS/dw * (-2x) with S the term sum and w = 1 - x^2."""
    _check_k(k)
    scalar = np.ndim(x) == 0
    xv = np.asarray(x, dtype=np.float64)
    w = 1.0 - xv * xv
    term = np.ones_like(xv)
    total = np.ones_like(xv)
    dtotal = np.zeros_like(xv)
    for i in range(1, k + 1):
        ratio = (2 * i - 1) / (2 * i)
        # c_i * w^(i-1)
        lower = term * ratio
        dtotal = dtotal + i * lower
        term = lower * w
        total = total + term
    value = xv * total
    grad = total - 2.0 * xv * xv * dtotal
    if scalar:
        return float(value), float(grad)
    return value, grad


def sign_poly_terms_max(x, k: int) -> float:
    """Largest |term_i| over i <= k for the given points (stays <= 1 on [-1, 1])."""
    _check_k(k)
    xv = np.asarray(x, dtype=np.float64)
    w = 1.0 - xv * xv
    term = np.ones_like(xv)
    peak = float(np.max(np.abs(term))) if term.size else 0.0
    for i in range(1, k + 1):
        term = term * w * ((2 * i - 1) / (2 * i))
        if term.size:
            peak = max(peak, float(np.max(np.abs(term))))
    return peak


def sign_poly_eval_decimal(x: float | Decimal, k: int, digits: int = 60) -> Decimal:
    """p_k(x) in Decimal arithmetic with `digits` significant digits."""
    _check_k(k)
    with localcontext() as ctx:
        ctx.prec = digits
        xd = Decimal(x)
        w = 1 - xd * xd
        term = Decimal(1)
        total = Decimal(1)
        for i in range(1, k + 1):
            term = term * w * (2 * i - 1) / (2 * i)
            total += term
        return +(xd * total)
