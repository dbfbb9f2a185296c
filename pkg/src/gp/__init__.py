"""
Finite-n Gaussian process free energy, posterior predictive losses and cross-validation
"""

from .crossval import CV_MODES, cv_score, exact_evaluations
from .hyper import POLICIES, HyperParams
from .metrics import (
    FreeEnergyTerms,
    PosteriorPredictive,
    evidence_optimal_lambda,
    free_energy,
    free_energy_terms,
    log_predictive_density,
    optimal_ppnll,
    posterior_predictive,
    ppl2,
    ppnll,
    weight_space_free_energy,
)

__all__ = [
    'CV_MODES',
    'FreeEnergyTerms',
    'HyperParams',
    'POLICIES',
    'PosteriorPredictive',
    'cv_score',
    'evidence_optimal_lambda',
    'exact_evaluations',
    'free_energy',
    'free_energy_terms',
    'log_predictive_density',
    'optimal_ppnll',
    'posterior_predictive',
    'ppl2',
    'ppnll',
    'weight_space_free_energy',
]
