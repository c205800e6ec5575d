# Path from repo root: app/trainer/hparams.py
from __future__ import annotations

import math

from app.core.errors import ConfigError


def derive_hparams(eps: float, K: float, m: int) -> tuple[float, int]:
    """
    eta = eps * m^(-1/5), T = ceil(K^2 / eps^2), both with unit constants.

    The ratio is shaved by a relative 1e-9 before the ceiling so float noise just above
    an integer (e.g. eps one ulp below 1) does not add an iteration.
    """
    if not 0.0 < eps < 1.0:
        raise ConfigError(f"eps must lie in (0, 1), got {eps}")
    if not K > 0.0:
        raise ConfigError(f"K must be > 0, got {K}")
    if m < 1:
        raise ConfigError(f"m must be >= 1, got {m}")
    eta = eps * float(m) ** -0.2
    ratio = (K * K) / (eps * eps)
    T = max(1, math.ceil(ratio - 1e-9 * ratio))
    return eta, int(T)
