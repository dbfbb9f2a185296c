"""
Kernel families, Gram matrices and their random-matrix linearization
"""

from .coefficients import (
    LAMBDA_POLICIES,
    PolicyKernel,
    coefficients,
    kernel_from_lambda_policy,
    rescale_bandwidth,
)
from .gram import cross_gram, diag, evaluate, gram
from .spec import INNER_PRODUCT, KERNEL_KINDS, RADIAL, KernelSpec, parse_kernel_id

__all__ = [
    'INNER_PRODUCT',
    'KERNEL_KINDS',
    'KernelSpec',
    'LAMBDA_POLICIES',
    'PolicyKernel',
    'RADIAL',
    'coefficients',
    'cross_gram',
    'diag',
    'evaluate',
    'gram',
    'kernel_from_lambda_policy',
    'parse_kernel_id',
    'rescale_bandwidth',
]
