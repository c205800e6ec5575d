# Path from repo root: app/adversary/projection.py
"""
Projection onto B_2(x0, rho) intersected with the sphere-cap domain

    X = { x in R^d : x_d = 1/2, |x|_2 = 1 },

i.e. the first d-1 coordinates lie on the sphere of radius sqrt(3)/2.
"""
from __future__ import annotations

import math

import numpy as np

from app.core.errors import DimensionMismatchError, DomainError, check_dim


CAP_RADIUS = math.sqrt(3.0) / 2.0
LAST_COORD = 0.5
DOMAIN_TOL = 1e-9


def domain_residual(x: np.ndarray) -> float:
    """max(|x_d - 1/2|, | |x| - 1 |)."""
    return max(abs(float(x[-1]) - LAST_COORD), abs(float(np.linalg.norm(x)) - 1.0))


def on_domain(x, tol: float = DOMAIN_TOL) -> bool:
    xv = np.asarray(x, dtype=np.float64)
    return xv.ndim == 1 and xv.shape[0] >= 2 and domain_residual(xv) <= tol


def require_domain(x0, tol: float = DOMAIN_TOL) -> np.ndarray:
    xv = np.asarray(x0, dtype=np.float64)
    if xv.ndim != 1 or xv.shape[0] < 2:
        raise DimensionMismatchError(f"domain points need d >= 2 coordinates, got shape {xv.shape}")
    if domain_residual(xv) > tol:
        raise DomainError(f"point is off the domain by {domain_residual(xv):.3e} (tolerance {tol:g})")
    return xv


def domain_project(v: np.ndarray, x0: np.ndarray) -> np.ndarray:
    """Set the last coordinate to 1/2 and rescale the head to norm sqrt(3)/2; a zero head takes x0's direction."""
    head = v[:-1]
    n = float(np.linalg.norm(head))
    if n == 0.0 or not math.isfinite(n):
        head = x0[:-1]
        n = float(np.linalg.norm(head))
    return np.concatenate([head * (CAP_RADIUS / n), [LAST_COORD]])


def clip_ball(v: np.ndarray, x0: np.ndarray, rho: float) -> np.ndarray:
    delta = v - x0
    n = float(np.linalg.norm(delta))
    if n <= rho:
        return v
    return x0 + delta * (rho / n)


def _orthogonal_unit(u0: np.ndarray) -> np.ndarray | None:
    if u0.shape[0] < 2:
        return None
    e = np.zeros_like(u0)
    e[int(np.argmin(np.abs(u0)))] = 1.0
    e = e - np.dot(e, u0) * u0
    return e / np.linalg.norm(e)


def geodesic_pullback(z: np.ndarray, x0: np.ndarray, rho: float) -> np.ndarray:
    """Point of X on the great circle from x0 towards z at Euclidean distance rho from x0."""
    u0 = x0[:-1] / np.linalg.norm(x0[:-1])
    uz = z[:-1] / np.linalg.norm(z[:-1])
    perp = uz - np.dot(uz, u0) * u0
    pn = float(np.linalg.norm(perp))
    if pn > 1e-15:
        e = perp / pn
    else:
        e = _orthogonal_unit(u0)
        if e is None:
            return x0.copy()
    theta = 2.0 * math.asin(min(1.0, rho / (2.0 * CAP_RADIUS)))
    u = math.cos(theta) * u0 + math.sin(theta) * e
    return np.concatenate([CAP_RADIUS * u, [LAST_COORD]])


def project_to_domain(v, x0, rho: float, rounds: int) -> np.ndarray:
    """
    Map v into B_2(x0, rho) on X.

    `rounds` alternations of (clip to the rho-ball, project to X) followed by a final
    projection to X. If the result still sits further than rho from x0, it is pulled
    back along the great circle through x0 to distance exactly rho.
    """
    x0v = require_domain(x0)
    vv = np.asarray(v, dtype=np.float64)
    check_dim("v", vv.shape[0] if vv.ndim == 1 else -1, x0v.shape[0])
    if rho < 0:
        raise ValueError("rho must be >= 0")
    if rho == 0.0:
        return x0v.copy()
    if domain_residual(vv) <= 1e-12 and float(np.linalg.norm(vv - x0v)) <= rho:
        return vv.copy()

    z = vv
    for _ in range(max(0, int(rounds))):
        z = domain_project(clip_ball(z, x0v, rho), x0v)
    z = domain_project(z, x0v)
    if float(np.linalg.norm(z - x0v)) > rho + 1e-12:
        z = geodesic_pullback(z, x0v, rho)
    return z
