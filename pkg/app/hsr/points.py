# Path from repo root: app/hsr/points.py
"""
Lifted neuron points and the brute-force half-space oracle.

A neuron (w_r, b_r) is stored as the (d+1)-vector p_r = (w_r || b_r); an input x
becomes the query q = (x || 1), so <q, p_r> = <w_r, x> + b_r and the activation
test is the half-space test <q, p_r> > tau.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from app.core.errors import DimensionMismatchError, DuplicateIdError, check_dim
from app.core.numerics import affine_scores
from app.net.network import ActiveSet, NetworkParams


@dataclass(frozen=True)
class LiftedPoint:
    id: int
    p: np.ndarray

    def __post_init__(self) -> None:
        vec = np.asarray(self.p, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "p", vec)
        object.__setattr__(self, "id", int(self.id))

    @property
    def dim(self) -> int:
        return int(self.p.shape[0])


def lift_columns(W: np.ndarray, b: np.ndarray, ids: np.ndarray | None = None) -> np.ndarray:
    """Rows (w_r || b_r) for r in `ids` (all columns when None), shape (k, d+1)."""
    if ids is None:
        return np.concatenate([W.T, b[:, None]], axis=1)
    idx = np.asarray(ids, dtype=np.int64)
    return np.concatenate([W[:, idx].T, b[idx][:, None]], axis=1)


def lift_params(params: NetworkParams) -> list[LiftedPoint]:
    P = lift_columns(params.W, params.b)
    return [LiftedPoint(r, P[r]) for r in range(params.m)]


def lift_query(x) -> np.ndarray:
    """(x || 1)."""
    xv = np.asarray(x, dtype=np.float64).reshape(-1)
    return np.concatenate([xv, [1.0]])


def stack_points(points: Sequence[LiftedPoint]) -> tuple[np.ndarray, np.ndarray]:
    """(ids, P) from a sequence of lifted points; raises DuplicateIdError on repeated ids."""
    if not points:
        return np.empty(0, dtype=np.int64), np.empty((0, 0), dtype=np.float64)
    dim = points[0].dim
    for pt in points:
        check_dim(f"lifted point {pt.id}", pt.dim, dim)
    ids = np.fromiter((pt.id for pt in points), dtype=np.int64, count=len(points))
    uniq, counts = np.unique(ids, return_counts=True)
    if uniq.size != ids.size:
        raise DuplicateIdError(f"duplicate ids in build: {uniq[counts > 1][:10].tolist()}")
    return ids, np.stack([pt.p for pt in points])


def half_space_scores(P: np.ndarray, q: np.ndarray) -> np.ndarray:
    """<q, p> for every row p of P through the ordered affine kernel."""
    d = q.shape[0] - 1
    return affine_scores(P[:, :d].T, q[:d], P[:, d] * q[d])


def brute_force_query(points, q, tau: float, *, ids: np.ndarray | None = None) -> ActiveSet:
    """
    Linear scan: { id : <q, p_id> > tau }, sorted ascending.

    `points` is either a sequence of LiftedPoint or a (k, d+1) array whose row
    index is the id (or whose ids are given by `ids`).
    """
    if isinstance(points, np.ndarray):
        P = np.asarray(points, dtype=np.float64)
        if P.ndim != 2:
            raise DimensionMismatchError(f"points must be a 2-D array, got shape {P.shape}")
        row_ids = np.arange(P.shape[0], dtype=np.int64) if ids is None else np.asarray(ids, dtype=np.int64)
    else:
        if len(points) == 0:
            return ActiveSet.empty()
        row_ids, P = stack_points(points)
    if P.shape[0] == 0:
        return ActiveSet.empty()
    qv = np.asarray(q, dtype=np.float64).reshape(-1)
    check_dim("query", qv.shape[0], P.shape[1])
    hits = row_ids[half_space_scores(P, qv) > tau]
    return ActiveSet(np.sort(hits))
