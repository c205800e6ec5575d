# Path from repo root: app/data/__init__.py
from app.data.dataset import (
    LABEL_MODES,
    Dataset,
    SeparabilityCheck,
    check_separability,
    generate_dataset,
    min_pairwise_distance,
    sample_sphere_cap,
    separability_gamma,
    verify_separability,
)
from app.data.io import dataset_to_csv, load_csv, save_csv


__all__ = [
    "LABEL_MODES",
    "Dataset",
    "SeparabilityCheck",
    "check_separability",
    "dataset_to_csv",
    "generate_dataset",
    "load_csv",
    "min_pairwise_distance",
    "sample_sphere_cap",
    "save_csv",
    "separability_gamma",
    "verify_separability",
]
