# Path from repo root: app/net/__init__.py
from app.net.network import (
    ActiveSet,
    InitialSnapshot,
    NetworkParams,
    SparseGradient,
    count_indicator_flips,
    coupling_gap,
    decompose_f,
    dense_grad_loss,
    exact_active_set,
    forward_dense,
    forward_sparse,
    grad_loss_sparse,
    init_params,
    input_gradient,
    output_scale,
    perturb_columns,
    preactivations,
    pseudo_forward,
    shifted_relu,
    shifted_relu_grad,
)
from app.net.norms import column_norms, norm_21, norm_2inf


__all__ = [
    "ActiveSet",
    "InitialSnapshot",
    "NetworkParams",
    "SparseGradient",
    "column_norms",
    "count_indicator_flips",
    "coupling_gap",
    "decompose_f",
    "dense_grad_loss",
    "exact_active_set",
    "forward_dense",
    "forward_sparse",
    "grad_loss_sparse",
    "init_params",
    "input_gradient",
    "norm_21",
    "norm_2inf",
    "output_scale",
    "perturb_columns",
    "preactivations",
    "pseudo_forward",
    "shifted_relu",
    "shifted_relu_grad",
]
