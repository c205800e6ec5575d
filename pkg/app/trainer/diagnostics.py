# Path from repo root: app/trainer/diagnostics.py
"""
Activation and movement diagnostics measured during training, plus the Gaussian
reference values they are compared against.

At initialization <w_{r,0}, x> + b_{r,0} ~ N(0, 2/m) for |x| = 1, since w and b
entries are N(0, 1/m).
"""
from __future__ import annotations

import math

import numpy as np
from scipy import stats

from app.core.errors import ConfigError, DimensionMismatchError, check_dim
from app.core.numerics import affine_scores
from app.net.network import InitialSnapshot, NetworkParams, preactivations


def _points(xs, d: int) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    if arr.ndim != 2:
        raise DimensionMismatchError(f"expected a sequence of points, got shape {arr.shape}")
    check_dim("points", arr.shape[1], d)
    return arr


def init_preactivations(snapshot: InitialSnapshot, x) -> np.ndarray:
    xv = np.asarray(x, dtype=np.float64).reshape(-1)
    check_dim("x", xv.shape[0], snapshot.d)
    return affine_scores(snapshot.W0, xv, snapshot.b0)


def count_sign_flips(params: NetworkParams, snapshot: InitialSnapshot, xs) -> int:
    """
    Number of neurons r for which some x in xs has
    sgn(<w_r, x> + b_r - tau) != sgn(<w_{r,0}, x> + b_{r,0} - tau), with sgn(0) = +.
    """
    pts = _points(xs, params.d)
    flipped = np.zeros(params.m, dtype=bool)
    for x in pts:
        now = preactivations(params, x) - params.tau >= 0.0
        then = init_preactivations(snapshot, x) - params.tau >= 0.0
        flipped |= now != then
    return int(np.count_nonzero(flipped))


def count_boundary_band(snapshot: InitialSnapshot, x, band: float, tau: float | None = None) -> int:
    """sum_r 1[ |<w_{r,0}, x> + b_{r,0} - tau| <= band ]; tau defaults to the snapshot's."""
    if band < 0:
        raise ValueError("band must be >= 0")
    tau = snapshot.tau if tau is None else tau
    z = init_preactivations(snapshot, x)
    return int(np.count_nonzero(np.abs(z - tau) <= band))


def active_count_at_init(snapshot: InitialSnapshot, xs, tau: float | None = None) -> np.ndarray:
    """k_{i,0} = #{r : <w_{r,0}, x_i> + b_{r,0} > tau} for every x_i; tau defaults to the snapshot's."""
    tau = snapshot.tau if tau is None else tau
    pts = _points(xs, snapshot.d)
    return np.array([int(np.count_nonzero(init_preactivations(snapshot, x) > tau)) for x in pts], dtype=np.int64)


# ---------------------------
# Gaussian reference values
# ---------------------------
def gaussian_upper_tail(t: float, var: float) -> float:
    """P[N(0, var) > t]."""
    if not var > 0:
        raise ConfigError(f"var must be > 0, got {var}")
    return float(stats.norm.sf(t, loc=0.0, scale=math.sqrt(var)))


def init_preactivation_var(m: int) -> float:
    return 2.0 / m


def band_probability(tau: float, band: float, m: int) -> float:
    """P[|N(0, 2/m) - tau| <= band]."""
    if band < 0:
        raise ConfigError(f"band must be >= 0, got {band}")
    scale = math.sqrt(init_preactivation_var(m))
    return float(stats.norm.cdf(tau + band, scale=scale) - stats.norm.cdf(tau - band, scale=scale))


def q0_bound(m: int, K: float) -> float:
    """2 m exp(-K^2 / (4 m^(1/5)))."""
    return 2.0 * m * math.exp(-(K * K) / (4.0 * float(m) ** 0.2))


def flip_budget(n: int, m: int) -> float:
    """n * m^(7/8): total sign flips allowed while every |Delta w_r| <= m^(-15/24)."""
    return n * float(m) ** (7.0 / 8.0)


def flip_radius(m: int) -> float:
    """m^(-15/24)."""
    return float(m) ** (-15.0 / 24.0)


def band_width(K: float, m: int) -> float:
    """K * m^(-3/5), the per-neuron movement scale."""
    return K * float(m) ** -0.6
