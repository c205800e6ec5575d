# Path from repo root: app/data/dataset.py
"""
Synthetic gamma-separable datasets on the sphere-cap domain.

gamma-separability: points pairwise at least eps apart, gamma = eps * (eps - 2 rho).
A Dataset carries the separation it declares (`eps_sep`) and the realized minimum
distance; construction fails with SeparabilityError when the points sit closer than
the declared separation.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from app.adversary.projection import CAP_RADIUS, LAST_COORD, domain_residual
from app.core.config import get_settings
from app.core.errors import (
    ConfigError,
    DimensionMismatchError,
    DomainError,
    InfeasibleDatasetError,
    SeparabilityError,
)
from app.core.rng import rng_for


log = logging.getLogger("data")

LabelMode = Literal["sign", "smooth"]
LABEL_MODES: tuple[str, ...] = ("sign", "smooth")
DATASET_DOMAIN_TOL = 1e-12
SEPARATION_TOL = 1e-12


def min_pairwise_distance(xs: np.ndarray) -> float:
    """Exhaustive O(n^2) minimum distance; +inf for fewer than two points."""
    n = xs.shape[0]
    if n < 2:
        return math.inf
    best = math.inf
    for i in range(n - 1):
        dist = np.linalg.norm(xs[i + 1 :] - xs[i], axis=1)
        best = min(best, float(dist.min()))
    return best


def separability_gamma(eps: float, rho: float) -> float:
    return eps * (eps - 2.0 * rho)


@dataclass(frozen=True, eq=False)
class Dataset:
    n: int
    d: int
    xs: np.ndarray  # (n, d)
    ys: np.ndarray  # (n,)
    eps_sep: float
    rho: float
    min_distance: float

    def __post_init__(self) -> None:
        xs = np.array(self.xs, dtype=np.float64)
        ys = np.array(self.ys, dtype=np.float64).reshape(-1)
        if xs.ndim != 2 or xs.shape != (self.n, self.d):
            raise DimensionMismatchError(f"xs must have shape ({self.n}, {self.d}), got {xs.shape}")
        if ys.shape[0] != self.n:
            raise DimensionMismatchError(f"ys must have length {self.n}, got {ys.shape[0]}")
        if self.d < 2:
            raise ConfigError("d must be >= 2")
        if ys.size and float(np.max(np.abs(ys))) > 1.0:
            raise ConfigError("labels must satisfy |y| <= 1")
        for i, x in enumerate(xs):
            if domain_residual(x) > DATASET_DOMAIN_TOL:
                raise DomainError(f"point {i} is off the domain by {domain_residual(x):.3e}")
        if self.n >= 2:
            realized = min_pairwise_distance(xs)
            if realized < self.eps_sep - SEPARATION_TOL * max(1.0, self.eps_sep):
                raise SeparabilityError(
                    f"points are {realized:.17g} apart, below the declared eps_sep={self.eps_sep:.17g}"
                )
            object.__setattr__(self, "min_distance", realized)
        xs.flags.writeable = False
        ys.flags.writeable = False
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def gamma(self) -> float:
        return separability_gamma(self.eps_sep, self.rho)

    @classmethod
    def from_arrays(cls, xs, ys, *, rho: float = 0.0, eps_sep: float | None = None) -> Dataset:
        """Wrap given points; `eps_sep` defaults to the realized minimum distance."""
        xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
        realized = min_pairwise_distance(xs)
        if eps_sep is None:
            eps_sep = realized
        return cls(
            n=int(xs.shape[0]),
            d=int(xs.shape[1]),
            xs=xs,
            ys=np.asarray(ys, dtype=np.float64),
            eps_sep=float(eps_sep),
            rho=float(rho),
            min_distance=realized,
        )


class SeparabilityCheck(NamedTuple):
    gamma: float
    eps: float
    vacuous: bool

    @property
    def separable(self) -> bool:
        return self.vacuous or self.gamma > 0.0


# ---------------------------
# Sampling
# ---------------------------
def sample_sphere_cap(d: int, rng: np.random.Generator) -> np.ndarray:
    """Last coordinate 1/2, first d-1 coordinates uniform on the sphere of radius sqrt(3)/2."""
    if d < 2:
        raise ConfigError(f"d must be >= 2, got {d}")
    while True:
        g = rng.standard_normal(d - 1)
        n = float(np.linalg.norm(g))
        if n > 0.0:
            return np.concatenate([g * (CAP_RADIUS / n), [LAST_COORD]])


def _labels(xs: np.ndarray, mode: str, rng: np.random.Generator) -> np.ndarray:
    if mode == "sign":
        return np.where(rng.integers(0, 2, size=xs.shape[0]) == 1, 1.0, -1.0)
    return np.clip(xs[:, 0], -1.0, 1.0)


def generate_dataset(
    n: int,
    d: int,
    eps_sep: float,
    rho: float,
    label_mode: LabelMode = "sign",
    seed: int = 0,
    *,
    budget: int | None = None,
) -> Dataset:
    """
    Rejection-sample n points on the cap with pairwise distance >= eps_sep.

    Raises InfeasibleDatasetError once `budget` candidate draws are spent.
    """
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    if rho < 0:
        raise ConfigError(f"rho must be >= 0, got {rho}")
    if not eps_sep > 2.0 * rho:
        raise ConfigError(f"need eps_sep > 2*rho, got eps_sep={eps_sep}, rho={rho}")
    if label_mode not in LABEL_MODES:
        raise ConfigError(f"label_mode must be one of {LABEL_MODES}, got {label_mode!r}")
    budget = budget or get_settings().REJECTION_BUDGET

    rng = rng_for(seed, "data")
    accepted = np.empty((n, d), dtype=np.float64)
    count = 0
    attempts = 0
    while count < n:
        if attempts >= budget:
            raise InfeasibleDatasetError(
                f"placed {count}/{n} points at separation {eps_sep} on the d={d} cap "
                f"after {attempts} draws; lower eps_sep or n, or raise the rejection budget"
            )
        cand = sample_sphere_cap(d, rng)
        attempts += 1
        if count == 0 or float(np.linalg.norm(accepted[:count] - cand, axis=1).min()) >= eps_sep:
            accepted[count] = cand
            count += 1

    ys = _labels(accepted, label_mode, rng)
    realized = min_pairwise_distance(accepted)
    log.debug("dataset n=%d d=%d: %d draws, realized separation %.6g", n, d, attempts, realized)
    return Dataset(
        n=n,
        d=d,
        xs=accepted,
        ys=ys,
        eps_sep=float(eps_sep),
        rho=float(rho),
        min_distance=realized,
    )


# ---------------------------
# Verification
# ---------------------------
def check_separability(ds: Dataset, rho: float | None = None) -> SeparabilityCheck:
    """Exhaustive scan: (gamma, eps, vacuous); gamma <= 0 means not separable at this rho."""
    r = ds.rho if rho is None else float(rho)
    if ds.n < 2:
        return SeparabilityCheck(gamma=math.inf, eps=math.inf, vacuous=True)
    eps = min_pairwise_distance(ds.xs)
    return SeparabilityCheck(gamma=separability_gamma(eps, r), eps=eps, vacuous=False)


def verify_separability(ds: Dataset, rho: float | None = None) -> float:
    """gamma = eps (eps - 2 rho) over the realized minimum distance; +inf when n < 2."""
    return check_separability(ds, rho).gamma
