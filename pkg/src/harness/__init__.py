"""
Experiment harness: configs, dimension sweeps, limit comparisons, validation and output
"""

from ..utils.optimize import minimize_scalar
from .cli import main
from .config import (
    DataSpec,
    ExperimentConfig,
    LambdaPolicy,
    load_config,
    parse_config,
)
from .emit import emit, write_csv, write_svg, write_table
from .limits import (
    LimitComparison,
    empirical_vs_limit,
    free_energy_limit,
    label_variance_check,
    limit_curve,
    max_deviation,
)
from .sweep import SweepRecord, ci_half_width, run_sweep, run_terms
from .validate import SUITES, ValidationReport, run_validation

__all__ = [
    'DataSpec',
    'ExperimentConfig',
    'LambdaPolicy',
    'LimitComparison',
    'SUITES',
    'SweepRecord',
    'ValidationReport',
    'ci_half_width',
    'emit',
    'empirical_vs_limit',
    'free_energy_limit',
    'label_variance_check',
    'limit_curve',
    'load_config',
    'main',
    'max_deviation',
    'minimize_scalar',
    'parse_config',
    'run_sweep',
    'run_terms',
    'run_validation',
    'write_csv',
    'write_svg',
    'write_table',
]
