# Path from repo root: app/trainer/metrics.py
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

from app.core.csv_io import render_csv, write_csv


METRICS_COLUMNS: tuple[str, ...] = (
    "t",
    "robust_loss",
    "union_size",
    "mean_k",
    "flips",
    "boundary_band",
    "d_max",
    "t_attack_ns",
    "t_query_ns",
    "t_forward_ns",
    "t_backward_ns",
    "t_update_ns",
)
TIMING_COLUMNS: tuple[str, ...] = tuple(c for c in METRICS_COLUMNS if c.endswith("_ns"))


@dataclass(frozen=True)
class IterationMetrics:
    """One row per iteration, measured at the weights W_t the iteration started from."""

    t: int
    robust_loss: float
    k_per_example: tuple[int, ...]
    union_size: int
    flips: int
    boundary_band: int
    d_max: float
    t_attack_ns: int = 0
    t_query_ns: int = 0
    t_forward_ns: int = 0
    t_backward_ns: int = 0
    t_update_ns: int = 0

    @property
    def mean_k(self) -> float:
        return sum(self.k_per_example) / len(self.k_per_example) if self.k_per_example else 0.0

    @property
    def flips_since_init(self) -> int:
        return self.flips

    @property
    def boundary_band_count(self) -> int:
        return self.boundary_band

    @property
    def total_ns(self) -> int:
        return self.t_attack_ns + self.t_query_ns + self.t_forward_ns + self.t_backward_ns + self.t_update_ns

    def row(self) -> list:
        return [
            self.t,
            float(self.robust_loss),
            self.union_size,
            float(self.mean_k),
            self.flips,
            self.boundary_band,
            float(self.d_max),
            self.t_attack_ns,
            self.t_query_ns,
            self.t_forward_ns,
            self.t_backward_ns,
            self.t_update_ns,
        ]

    def non_timing(self) -> tuple:
        return (self.t, self.robust_loss, self.k_per_example, self.union_size, self.flips, self.boundary_band, self.d_max)


def render_metrics_csv(metrics: Iterable[IterationMetrics]) -> str:
    return render_csv(METRICS_COLUMNS, (m.row() for m in metrics))


def write_metrics_csv(path: Path | str, metrics: Sequence[IterationMetrics]) -> Path:
    return write_csv(path, METRICS_COLUMNS, (m.row() for m in metrics))


def strip_timings(csv_text: str) -> str:
    """Drop the timing columns from rendered metrics CSV (for determinism comparisons)."""
    keep = [i for i, c in enumerate(METRICS_COLUMNS) if c not in TIMING_COLUMNS]
    out = []
    for line in csv_text.splitlines():
        cells = line.split(",")
        out.append(",".join(cells[i] for i in keep))
    return "\n".join(out) + ("\n" if csv_text.endswith("\n") else "")
