"""
Datasets: synthetic generators, whitening, augmentation and CSV input/output
"""

from .dataset import LABEL_NAME, Dataset, DatasetMeta
from .generators import (
    AUGMENT_MODES,
    THETA_MODES,
    augment,
    ill_conditioned_covariance,
    misspec_diagnostic,
    misspecify_labels,
    subsample,
    surrogate_covariates,
    synth_gaussian,
    theta0,
)
from .io import load_csv, save_csv
from .preprocess import normalize, whiten

__all__ = [
    'AUGMENT_MODES',
    'Dataset',
    'DatasetMeta',
    'LABEL_NAME',
    'THETA_MODES',
    'augment',
    'ill_conditioned_covariance',
    'load_csv',
    'misspec_diagnostic',
    'misspecify_labels',
    'normalize',
    'save_csv',
    'subsample',
    'surrogate_covariates',
    'synth_gaussian',
    'theta0',
    'whiten',
]
