"""
Digamma function and its summation identities
"""

from .digamma import (
    EULER_GAMMA,
    digamma,
    expected_logdet_wishart,
    sum_digamma,
    sum_digamma_direct,
    sum_digamma_half,
    sum_digamma_half_closed,
    sum_digamma_half_direct,
)

__all__ = [
    'EULER_GAMMA',
    'digamma',
    'expected_logdet_wishart',
    'sum_digamma',
    'sum_digamma_direct',
    'sum_digamma_half',
    'sum_digamma_half_closed',
    'sum_digamma_half_direct',
]
