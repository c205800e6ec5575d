# Path from repo root: app/trainer/__init__.py
from app.trainer.config import TrainConfig
from app.trainer.diagnostics import (
    active_count_at_init,
    band_probability,
    band_width,
    count_boundary_band,
    count_sign_flips,
    flip_budget,
    flip_radius,
    gaussian_upper_tail,
    init_preactivation_var,
    q0_bound,
)
from app.trainer.engines import DenseEngine, HsrEngine, make_engine
from app.trainer.hparams import derive_hparams
from app.trainer.loop import TrainResult, train
from app.trainer.loss import LOSSES, AbsoluteLoss, LossFn, get_loss
from app.trainer.metrics import METRICS_COLUMNS, IterationMetrics, render_metrics_csv, strip_timings, write_metrics_csv


__all__ = [
    "LOSSES",
    "METRICS_COLUMNS",
    "AbsoluteLoss",
    "DenseEngine",
    "HsrEngine",
    "IterationMetrics",
    "LossFn",
    "TrainConfig",
    "TrainResult",
    "active_count_at_init",
    "band_probability",
    "band_width",
    "count_boundary_band",
    "count_sign_flips",
    "derive_hparams",
    "flip_budget",
    "flip_radius",
    "gaussian_upper_tail",
    "get_loss",
    "init_preactivation_var",
    "make_engine",
    "q0_bound",
    "render_metrics_csv",
    "strip_timings",
    "write_metrics_csv",
    "train",
]
