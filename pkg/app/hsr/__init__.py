# Path from repo root: app/hsr/__init__.py
from app.hsr.config import IndexConfig
from app.hsr.index import HsrIndex, QueryResult
from app.hsr.points import (
    LiftedPoint,
    brute_force_query,
    half_space_scores,
    lift_columns,
    lift_params,
    lift_query,
    stack_points,
)


__all__ = [
    "HsrIndex",
    "IndexConfig",
    "LiftedPoint",
    "QueryResult",
    "brute_force_query",
    "half_space_scores",
    "lift_columns",
    "lift_params",
    "lift_query",
    "stack_points",
]
