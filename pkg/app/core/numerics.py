# Path from repo root: app/core/numerics.py
from __future__ import annotations

import math

import numpy as np


def affine_scores(rows: np.ndarray, x: np.ndarray, offset: np.ndarray) -> np.ndarray:
    """
    offset + sum_j rows[j] * x[j], accumulated coordinate by coordinate in ascending j.

    Every output entry is produced by the same sequence of elementwise IEEE
    operations on its own column, so the value for a column never depends on which
    other columns are evaluated alongside it. The network's pre-activations and the
    index's lifted dot products both go through here, which is what makes
    index-reported active sets agree bit-for-bit with dense evaluation.

    rows: (d, k) array, x: (d,) vector, offset: (k,) array.
    """
    acc = np.array(offset, dtype=np.float64, copy=True)
    for j in range(rows.shape[0]):
        acc = acc + rows[j] * x[j]
    return acc


def exact_sum(values) -> float:
    """Correctly rounded sum; independent of order and of interleaved zeros."""
    return math.fsum(np.asarray(values, dtype=np.float64).ravel().tolist())


def exact_row_sums(matrix: np.ndarray) -> np.ndarray:
    """Correctly rounded sum of every row of a 2-D array."""
    return np.array([math.fsum(row) for row in np.asarray(matrix, dtype=np.float64).tolist()], dtype=np.float64)


def ascending_sum(values) -> float:
    """
    0.0 + v[0] + v[1] + ... evaluated strictly left to right.

    Zero terms leave the running value untouched, so a sum over a subset equals the
    full sum whenever every omitted term is +-0.0.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        return 0.0
    return float(np.add.accumulate(np.concatenate(([0.0], v)))[-1])
