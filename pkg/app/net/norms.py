# Path from repo root: app/net/norms.py
from __future__ import annotations

import numpy as np


def column_norms(M) -> np.ndarray:
    """Euclidean norm of every column of a d x m matrix."""
    arr = np.asarray(M, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    return np.linalg.norm(arr, axis=0)


def norm_2inf(M) -> float:
    """||M||_{2,inf}: largest column norm (0 for an empty matrix)."""
    norms = column_norms(M)
    return float(norms.max()) if norms.size else 0.0


def norm_21(M) -> float:
    """||M||_{2,1}: sum of column norms."""
    return float(np.sum(column_norms(M)))
