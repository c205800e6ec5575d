# Path from repo root: app/polyapprox/complexity.py
from __future__ import annotations

import math
from collections.abc import Sequence
from numbers import Real

from app.core.errors import ConfigError
from app.polyapprox.polynomial import Polynomial


def complexity_measures(coeffs: Sequence[Real] | Polynomial, eps1: float, c: float = 1.0) -> tuple[float, float]:
    """
    (C_plain, C_eps) for phi(z) = sum_j alpha_j z^j:

      C_plain = c * sum_j (j + 1)^1.75 |alpha_j|
      C_eps   = sum_j c^j (1 + sqrt(ln(1/eps1) / j)^j) |alpha_j|

    The j = 0 factor of C_eps is taken as 2 (c^0 * (1 + 1)).
    """
    if not 0.0 < eps1 < 1.0:
        raise ConfigError(f"eps1 must lie in (0, 1), got {eps1}")
    if c < 1.0:
        raise ConfigError(f"c must be >= 1, got {c}")
    alphas = coeffs.coeffs if isinstance(coeffs, Polynomial) else tuple(coeffs)
    log_inv = math.log(1.0 / eps1)
    plain = []
    weighted = []
    for j, a in enumerate(alphas):
        mag = abs(float(a))
        plain.append((j + 1) ** 1.75 * mag)
        if j == 0:
            weighted.append(2.0 * mag)
        else:
            weighted.append(c**j * (1.0 + math.sqrt(log_inv / j) ** j) * mag)
    return c * math.fsum(plain), math.fsum(weighted)
