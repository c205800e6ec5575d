# Path from repo root: app/data/io.py
"""
Dataset CSV layout:

    d,n,eps_sep,rho
    <d>,<n>,<eps_sep>,<rho>
    x_1,...,x_d,y
    <one row per point>

Floats are written at 17 significant digits, which round-trips every double.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from app.core.csv_io import render_csv
from app.core.errors import ConfigError
from app.data.dataset import Dataset, min_pairwise_distance


META_HEADER = ("d", "n", "eps_sep", "rho")


def dataset_to_csv(ds: Dataset) -> str:
    meta = render_csv(META_HEADER, [[ds.d, ds.n, float(ds.eps_sep), float(ds.rho)]])
    cols = [f"x_{j + 1}" for j in range(ds.d)] + ["y"]
    rows = [[*map(float, x), float(y)] for x, y in zip(ds.xs, ds.ys)]
    return meta + render_csv(cols, rows)


def save_csv(ds: Dataset, path: Path | str) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(dataset_to_csv(ds), encoding="utf-8")
    return p


def load_csv(path: Path | str) -> Dataset:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if len(rows) < 2 or tuple(c.strip() for c in rows[0]) != META_HEADER:
        raise ConfigError(f"{path}: expected header {','.join(META_HEADER)}")
    try:
        d, n = int(rows[1][0]), int(rows[1][1])
        eps_sep, rho = float(rows[1][2]), float(rows[1][3])
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"{path}: malformed metadata row: {exc}") from None
    body = rows[2:]
    if body and body[0] and body[0][0].strip() == "x_1":
        body = body[1:]
    if len(body) != n:
        raise ConfigError(f"{path}: expected {n} data rows, found {len(body)}")
    try:
        data = np.array([[float(v) for v in r] for r in body], dtype=np.float64).reshape(n, d + 1)
    except ValueError as exc:
        raise ConfigError(f"{path}: malformed data row: {exc}") from None
    xs, ys = data[:, :d], data[:, d]
    return Dataset(n=n, d=d, xs=xs, ys=ys, eps_sep=eps_sep, rho=rho, min_distance=min_pairwise_distance(xs))


__all__ = ["dataset_to_csv", "load_csv", "save_csv"]
