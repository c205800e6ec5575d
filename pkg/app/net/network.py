# Path from repo root: app/net/network.py
"""
Two-layer shifted-ReLU network f(x) = sum_r a_r * sigma_tau(<w_r, x> + b_r).

Conventions
-----------
- sigma_tau(z) = z if z > tau else 0 (strict), derivative 1 above tau and 0 otherwise,
  including at z == tau.
- The pseudo-network and the A/B/C decomposition use the non-strict indicator
  1[z >= tau] evaluated at initialization.
- f(x) is summed in ascending r order starting from 0.0; inactive neurons add +-0.0, so
  the active-set sum and the dense sum are bit-identical. Gradient and decomposition
  sums over neurons are correctly rounded (math.fsum), which is order independent.
- W is stored d x m: column r is w_r.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from app.core.errors import ConfigError, DimensionMismatchError, check_dim
from app.core.numerics import affine_scores, ascending_sum, exact_row_sums, exact_sum
from app.core.rng import rng_for


if TYPE_CHECKING:
    from app.trainer.loss import LossFn


# ---------------------------
# Types
# ---------------------------
@dataclass
class NetworkParams:
    """Trained object (a, W, b) with threshold tau. Only columns of W ever change."""

    m: int
    d: int
    a: np.ndarray
    W: np.ndarray
    b: np.ndarray
    tau: float

    def __post_init__(self) -> None:
        if self.m < 1 or self.d < 2:
            raise ConfigError(f"need m >= 1 and d >= 2, got m={self.m}, d={self.d}")
        check_dim("W rows", self.W.shape[0], self.d)
        check_dim("W columns", self.W.shape[1], self.m)
        check_dim("a", self.a.shape[0], self.m)
        check_dim("b", self.b.shape[0], self.m)
        self.a.flags.writeable = False
        self.b.flags.writeable = False

    def copy(self) -> NetworkParams:
        return NetworkParams(self.m, self.d, self.a.copy(), self.W.copy(), self.b.copy(), self.tau)


@dataclass(frozen=True)
class InitialSnapshot:
    """Read-only copies of (W0, b0, a0) taken at iteration 0, with the threshold they were drawn for."""

    W0: np.ndarray
    b0: np.ndarray
    a0: np.ndarray
    tau: float = 0.0

    @classmethod
    def of(cls, params: NetworkParams) -> InitialSnapshot:
        W0, b0, a0 = params.W.copy(), params.b.copy(), params.a.copy()
        for arr in (W0, b0, a0):
            arr.flags.writeable = False
        return cls(W0=W0, b0=b0, a0=a0, tau=params.tau)

    @property
    def m(self) -> int:
        return int(self.W0.shape[1])

    @property
    def d(self) -> int:
        return int(self.W0.shape[0])

    def delta(self, params: NetworkParams) -> np.ndarray:
        """Delta W = W - W0, column r is w_r - w_{r,0}."""
        _check_shared(params, self)
        return params.W - self.W0


@dataclass(frozen=True)
class ActiveSet:
    """Strictly increasing neuron indices whose pre-activation is above tau for one query point."""

    indices: np.ndarray

    def __post_init__(self) -> None:
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1:
            raise DimensionMismatchError("active set must be one-dimensional")
        if idx.size > 1 and not bool(np.all(idx[1:] > idx[:-1])):
            raise ValueError("active set indices must be strictly increasing")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def empty(cls) -> ActiveSet:
        return cls(np.empty(0, dtype=np.int64))

    @classmethod
    def from_iterable(cls, ids: Iterable[int]) -> ActiveSet:
        return cls(np.unique(np.fromiter(ids, dtype=np.int64)))

    def __len__(self) -> int:
        return int(self.indices.size)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices.tolist())

    def __contains__(self, r: object) -> bool:
        if not isinstance(r, (int, np.integer)):
            return False
        pos = int(np.searchsorted(self.indices, r))
        return pos < self.indices.size and int(self.indices[pos]) == int(r)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ActiveSet):
            return NotImplemented
        return bool(np.array_equal(self.indices, other.indices))

    def __hash__(self) -> int:
        return hash(self.indices.tobytes())


@dataclass(frozen=True)
class SparseGradient:
    """Loss gradient w.r.t. W restricted to the active columns; other columns are zero."""

    indices: np.ndarray  # (k,)
    columns: np.ndarray  # (d, k)

    def to_dense(self, m: int) -> np.ndarray:
        out = np.zeros((self.columns.shape[0], m), dtype=np.float64)
        out[:, self.indices] = self.columns
        return out

    def __len__(self) -> int:
        return int(self.indices.size)


# ---------------------------
# Activation
# ---------------------------
def shifted_relu(z, tau: float):
    """sigma_tau(z) = z if z > tau else 0. Scalars in, float out; arrays in, arrays out."""
    if np.ndim(z) == 0:
        zf = float(z)
        return zf if zf > tau else 0.0
    z = np.asarray(z, dtype=np.float64)
    return np.where(z > tau, z, 0.0)


def shifted_relu_grad(z, tau: float):
    """Subgradient of sigma_tau: 1 above tau, 0 at or below it."""
    if np.ndim(z) == 0:
        return 1.0 if float(z) > tau else 0.0
    return (np.asarray(z, dtype=np.float64) > tau).astype(np.float64)


# ---------------------------
# Initialization
# ---------------------------
def output_scale(m: int) -> float:
    """|a_r| = m^(-1/5)."""
    return float(m) ** -0.2


def init_params(m: int, d: int, tau: float, seed: int) -> tuple[NetworkParams, InitialSnapshot]:
    """
    W, b entries i.i.d. N(0, 1/m); a entries uniform on {+-m^(-1/5)}.

    Draws come from the ``init`` stream in the order W, b, a.
    """
    if m < 1 or d < 2:
        raise ConfigError(f"need m >= 1 and d >= 2, got m={m}, d={d}")
    if not (tau >= 0.0) or not np.isfinite(tau):
        raise ConfigError(f"tau must be a finite real >= 0, got {tau!r}")
    rng = rng_for(seed, "init")
    std = 1.0 / np.sqrt(m)
    W = rng.normal(0.0, std, size=(d, m))
    b = rng.normal(0.0, std, size=m)
    signs = np.where(rng.integers(0, 2, size=m) == 1, 1.0, -1.0)
    a = signs * output_scale(m)
    params = NetworkParams(m=m, d=d, a=a, W=W, b=b, tau=float(tau))
    return params, InitialSnapshot.of(params)


# ---------------------------
# Forward / backward
# ---------------------------
def _as_input(params_d: int, x) -> np.ndarray:
    xv = np.asarray(x, dtype=np.float64)
    if xv.ndim != 1:
        raise DimensionMismatchError(f"input must be a vector, got shape {xv.shape}")
    check_dim("x", xv.shape[0], params_d)
    return xv


def _check_shared(params: NetworkParams, snapshot: InitialSnapshot) -> None:
    if snapshot.W0.shape != params.W.shape:
        raise DimensionMismatchError(f"snapshot shape {snapshot.W0.shape} != params shape {params.W.shape}")


def preactivations(params: NetworkParams, x, indices: np.ndarray | None = None) -> np.ndarray:
    """<w_r, x> + b_r for every r (or for r in `indices`), via the ordered affine kernel."""
    xv = _as_input(params.d, x)
    if indices is None:
        return affine_scores(params.W, xv, params.b)
    idx = np.asarray(indices, dtype=np.int64)
    return affine_scores(params.W[:, idx], xv, params.b[idx])


def exact_active_set(params: NetworkParams, x) -> ActiveSet:
    """Brute-force Q(x) = {r : <w_r, x> + b_r > tau}."""
    z = preactivations(params, x)
    return ActiveSet(np.flatnonzero(z > params.tau).astype(np.int64))


def forward_dense(params: NetworkParams, x) -> float:
    """f(x) over all m neurons."""
    z = preactivations(params, x)
    return ascending_sum(params.a * shifted_relu(z, params.tau))


def forward_sparse(params: NetworkParams, x, active: ActiveSet) -> float:
    """f(x) evaluated only on `active`, which must be the exact active set for x."""
    idx = active.indices
    if idx.size == 0:
        _as_input(params.d, x)
        return 0.0
    z = preactivations(params, x, idx)
    return ascending_sum(params.a[idx] * z)


def grad_loss_sparse(
    params: NetworkParams,
    x,
    y: float,
    active: ActiveSet,
    loss: LossFn,
    *,
    f: float | None = None,
) -> SparseGradient:
    """
    Column r in `active`: a_r * l'(y, f(x)) * x. Inactive columns are exactly zero.

    `f` may carry an already computed forward_sparse value for (x, active).
    """
    xv = _as_input(params.d, x)
    idx = active.indices
    if idx.size == 0:
        return SparseGradient(indices=idx, columns=np.zeros((params.d, 0), dtype=np.float64))
    if f is None:
        f = forward_sparse(params, xv, active)
    g = loss.subgrad(y, f)
    coef = params.a[idx] * g
    return SparseGradient(indices=idx.copy(), columns=xv[:, None] * coef[None, :])


def dense_grad_loss(params: NetworkParams, x, y: float, loss: LossFn) -> np.ndarray:
    """Dense analytic d x m gradient of l(y, f(x)) w.r.t. W."""
    xv = _as_input(params.d, x)
    z = preactivations(params, xv)
    g = loss.subgrad(y, forward_dense(params, xv))
    coef = np.where(z > params.tau, params.a * g, 0.0)
    return xv[:, None] * coef[None, :]


def input_gradient(params: NetworkParams, x, active: ActiveSet | None = None) -> np.ndarray:
    """df/dx = sum over active r of a_r * w_r (dense mask when `active` is None)."""
    xv = _as_input(params.d, x)
    if active is None:
        z = preactivations(params, xv)
        weights = np.where(z > params.tau, params.a, 0.0)
        return exact_row_sums(params.W * weights[None, :])
    idx = active.indices
    if idx.size == 0:
        return np.zeros(params.d, dtype=np.float64)
    return exact_row_sums(params.W[:, idx] * params.a[idx][None, :])


# ---------------------------
# Pseudo-network and decomposition
# ---------------------------
def _init_indicator(snapshot: InitialSnapshot, x: np.ndarray, tau: float) -> tuple[np.ndarray, np.ndarray]:
    z0 = affine_scores(snapshot.W0, x, snapshot.b0)
    return z0, z0 >= tau


def pseudo_forward(params: NetworkParams, snapshot: InitialSnapshot, x) -> float:
    """g(x; W) = sum_r a_{r,0} <w_r - w_{r,0}, x> 1[<w_{r,0}, x> + b_{r,0} >= tau]."""
    _check_shared(params, snapshot)
    xv = _as_input(params.d, x)
    _, phi0 = _init_indicator(snapshot, xv, params.tau)
    inner = affine_scores(params.W - snapshot.W0, xv, np.zeros(params.m))
    return exact_sum(np.where(phi0, snapshot.a0 * inner, 0.0))


def decompose_f(params: NetworkParams, snapshot: InitialSnapshot, x) -> tuple[float, float, float]:
    """
    (A, B, C) with
      A = sum a0 <dw, x> Phi,   B = sum a0 (<w0, x> + b0) Phi0,   C = sum a0 (<w0, x> + b0)(Phi - Phi0),
    Phi = 1[<w, x> + b >= tau] at current weights, Phi0 the same at initialization.
    """
    _check_shared(params, snapshot)
    xv = _as_input(params.d, x)
    z0, phi0 = _init_indicator(snapshot, xv, params.tau)
    phi = preactivations(params, xv) >= params.tau
    inner = affine_scores(params.W - snapshot.W0, xv, np.zeros(params.m))
    A = exact_sum(np.where(phi, snapshot.a0 * inner, 0.0))
    B = exact_sum(np.where(phi0, snapshot.a0 * z0, 0.0))
    diff = phi.astype(np.float64) - phi0.astype(np.float64)
    C = exact_sum(snapshot.a0 * z0 * diff)
    return A, B, C


def count_indicator_flips(params: NetworkParams, snapshot: InitialSnapshot, x) -> int:
    """Number of r whose >= tau indicator differs between current and initial weights at x."""
    _check_shared(params, snapshot)
    xv = _as_input(params.d, x)
    _, phi0 = _init_indicator(snapshot, xv, params.tau)
    phi = preactivations(params, xv) >= params.tau
    return int(np.count_nonzero(phi != phi0))


# ---------------------------
# Coupling helpers
# ---------------------------
def perturb_columns(params: NetworkParams, snapshot: InitialSnapshot, radius: float, rng: np.random.Generator) -> None:
    """Set W = W0 + Delta with every column of Delta a uniform direction of norm `radius`."""
    _check_shared(params, snapshot)
    if radius < 0:
        raise ConfigError("radius must be >= 0")
    g = rng.standard_normal(size=snapshot.W0.shape)
    norms = np.linalg.norm(g, axis=0)
    norms[norms == 0.0] = 1.0
    params.W[...] = snapshot.W0 + radius * (g / norms[None, :])


def coupling_gap(params: NetworkParams, snapshot: InitialSnapshot, xs) -> float:
    """sup over xs of |f(x; W) - g(x; W)|."""
    gap = 0.0
    for x in np.asarray(xs, dtype=np.float64):
        gap = max(gap, abs(forward_dense(params, x) - pseudo_forward(params, snapshot, x)))
    return gap
