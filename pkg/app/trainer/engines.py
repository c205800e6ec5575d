# Path from repo root: app/trainer/engines.py
"""
Active-set engines. Both answer Q(x) = {r : <w_r, x> + b_r > tau} exactly; they differ
only in cost.

  hsr    dynamic ball-tree index over lifted points; updated columns are moved in place
  dense  brute-force scan over all m lifted points
"""
from __future__ import annotations

import threading
from typing import Protocol

import numpy as np

from app.core.errors import ConfigError
from app.hsr.config import IndexConfig
from app.hsr.index import HsrIndex, QueryResult
from app.hsr.points import brute_force_query, lift_columns, lift_query
from app.net.network import ActiveSet, NetworkParams


class ActiveSetEngine(Protocol):
    name: str

    def query(self, x: np.ndarray) -> ActiveSet: ...

    def query_with_stats(self, x: np.ndarray) -> QueryResult: ...

    def update(self, ids: np.ndarray, params: NetworkParams) -> None:
        """Refresh the stored points of `ids` from the current parameters."""
        ...

    def stats(self) -> dict: ...


class HsrEngine:
    name = "hsr"

    def __init__(self, params: NetworkParams, config: IndexConfig | None = None) -> None:
        self.tau = params.tau
        self.index = HsrIndex.from_arrays(
            np.arange(params.m, dtype=np.int64),
            lift_columns(params.W, params.b),
            config=config,
        )

    def query(self, x: np.ndarray) -> ActiveSet:
        return self.index.query(lift_query(x), self.tau)

    def query_with_stats(self, x: np.ndarray) -> QueryResult:
        return self.index.query_with_stats(lift_query(x), self.tau)

    def update(self, ids: np.ndarray, params: NetworkParams) -> None:
        if ids.size:
            self.index.update(ids, lift_columns(params.W, params.b, ids))

    def stats(self) -> dict:
        return {"engine": self.name, **self.index.stats()}


class DenseEngine:
    name = "dense"

    def __init__(self, params: NetworkParams) -> None:
        self.tau = params.tau
        self.points = lift_columns(params.W, params.b)
        self._queries = 0
        self._lock = threading.Lock()

    def query(self, x: np.ndarray) -> ActiveSet:
        with self._lock:
            self._queries += 1
        return brute_force_query(self.points, lift_query(x), self.tau)

    def query_with_stats(self, x: np.ndarray) -> QueryResult:
        return QueryResult(self.query(x), int(self.points.shape[0]))

    def update(self, ids: np.ndarray, params: NetworkParams) -> None:
        if ids.size:
            self.points[ids] = lift_columns(params.W, params.b, ids)

    def stats(self) -> dict:
        m = int(self.points.shape[0])
        with self._lock:
            q = self._queries
        return {"engine": self.name, "live": m, "queries": q, "visits_total": q * m, "mean_visits": float(m) if q else 0.0}


def make_engine(kind: str, params: NetworkParams, index_config: IndexConfig | None = None) -> ActiveSetEngine:
    if kind == "hsr":
        return HsrEngine(params, index_config)
    if kind == "dense":
        return DenseEngine(params)
    raise ConfigError(f"unknown engine {kind!r}; expected 'hsr' or 'dense'")
