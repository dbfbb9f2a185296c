"""
Random-matrix limits of the Bayes free energy and its optimal hyperparameters
"""

from .free_energy import (
    RmtContext,
    critical_point_residual,
    gram_logdet_limit,
    gram_trace_limit,
    limiting_free_energy,
    limiting_free_energy_curve,
    optimal_gamma,
    optimal_gamma_alternative,
    optimal_lambda,
    optimal_lambda_fixed_beta,
    optimal_mu,
    policy_lambda,
)
from .limits import (
    logdet_limit,
    logdet_limit_quadrature,
    mp_stieltjes,
    trace_limit,
    trace_limit_fixed_point_residual,
)

__all__ = [
    'RmtContext',
    'critical_point_residual',
    'gram_logdet_limit',
    'gram_trace_limit',
    'limiting_free_energy',
    'limiting_free_energy_curve',
    'logdet_limit',
    'logdet_limit_quadrature',
    'mp_stieltjes',
    'optimal_gamma',
    'optimal_gamma_alternative',
    'optimal_lambda',
    'optimal_lambda_fixed_beta',
    'optimal_mu',
    'policy_lambda',
    'trace_limit',
    'trace_limit_fixed_point_residual',
]
