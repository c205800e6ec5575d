# Path from repo root: app/polyapprox/chebyshev.py
"""
First-kind Chebyshev polynomials.

Closed form:  C_k(x) = sum_{i=0}^{floor(k/2)} binom(k, 2i) (x^2 - 1)^i x^(k - 2i),
which satisfies C_0 = 1, C_1 = x, C_{k+1} = 2x C_k - C_{k-1}.

The recurrence without the factor 2 (C_{k+1} = x C_k - C_{k-1}) already disagrees with
the closed form at k = 2; `literal_recurrence_eval` keeps it around so that mismatch
stays visible in the verification table.
"""
from __future__ import annotations

import math

import numpy as np

from app.core.errors import ConfigError
from app.polyapprox.polynomial import Polynomial


def _check_k(k: int) -> None:
    if k < 0:
        raise ConfigError(f"k must be >= 0, got {k}")


def chebyshev_eval(k: int, x):
    """C_k(x) by the three-term recurrence."""
    _check_k(k)
    scalar = np.ndim(x) == 0
    xv = np.asarray(x, dtype=np.float64)
    prev, cur = np.ones_like(xv), xv.copy()
    if k == 0:
        out = prev
    else:
        for _ in range(k - 1):
            prev, cur = cur, 2.0 * xv * cur - prev
        out = cur
    return float(out) if scalar else out


def chebyshev_eval_closed(k: int, x):
    """C_k(x) straight from the closed form (float arithmetic)."""
    _check_k(k)
    scalar = np.ndim(x) == 0
    xv = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(xv)
    for i in range(k // 2 + 1):
        out = out + math.comb(k, 2 * i) * (xv * xv - 1.0) ** i * xv ** (k - 2 * i)
    return float(out) if scalar else out


def literal_recurrence_eval(k: int, x):
    """C_{k+1} = x C_k - C_{k-1} from C_0 = 1, C_1 = x. Not the Chebyshev family for k >= 2."""
    _check_k(k)
    scalar = np.ndim(x) == 0
    xv = np.asarray(x, dtype=np.float64)
    prev, cur = np.ones_like(xv), xv.copy()
    if k == 0:
        out = prev
    else:
        for _ in range(k - 1):
            prev, cur = cur, xv * cur - prev
        out = cur
    return float(out) if scalar else out


def chebyshev_coeffs(k: int) -> tuple[int, ...]:
    """Exact integer monomial coefficients of C_k, ascending degree, length k + 1."""
    _check_k(k)
    coeffs = [0] * (k + 1)
    for i in range(k // 2 + 1):
        outer = math.comb(k, 2 * i)
        # (x^2 - 1)^i = sum_j binom(i, j) x^(2j) (-1)^(i - j)
        for j in range(i + 1):
            coeffs[k - 2 * i + 2 * j] += outer * math.comb(i, j) * (-1) ** (i - j)
    return tuple(coeffs)


def chebyshev_polynomial(k: int) -> Polynomial:
    return Polynomial(chebyshev_coeffs(k))


def coefficient_bound(k: int) -> int:
    """2^(2k)."""
    return 4**k
