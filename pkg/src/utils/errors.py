"""Exception hierarchy shared by every gpdd module.

Each error also derives from the builtin a caller would expect
(ValueError for bad inputs, ArithmeticError for numerical breakdown).
"""
from typing import Optional


class GpddError(Exception):
    """Base class for all gpdd errors."""


class DomainError(GpddError, ValueError):
    """An argument lies outside the domain of a formula."""


class NoOptimalLambda(DomainError):
    """The limiting free energy has no minimizer in lambda.

    lambda-scaled offsets (beta = beta0 * lambda) need gamma + beta0 < 1; with a
    fixed offset the search finds F_inf still decreasing at the top of its bracket.
    """

    def __init__(self, gamma: float, beta0: float, fixed_beta: bool = False):
        self.gamma = gamma
        self.beta0 = beta0
        self.fixed_beta = fixed_beta
        if fixed_beta:
            msg = (
                f"no optimal lambda exists for gamma={gamma:g}, fixed beta={beta0:g} "
                f"(F_inf keeps decreasing in lambda)"
            )
        else:
            msg = (
                f"no optimal lambda exists for gamma={gamma:g}, beta0={beta0:g} "
                f"(requires gamma < 1 - beta0 = {1.0 - beta0:g})"
            )
        super().__init__(msg)


class DegenerateKernel(DomainError):
    """The linearization slope alpha is not positive."""


class NotLambdaScalable(DomainError):
    """The bandwidth transform does not make alpha and beta/lambda constant."""


class FactorizationFailure(GpddError, ArithmeticError):
    """K + lambda*gamma*I is not numerically positive definite."""


class DegenerateData(GpddError, ValueError):
    """Whitening or normalization is impossible for the given data."""


class DataFormatError(GpddError, ValueError):
    """A CSV file could not be read as a numeric dataset."""


class ConfigError(GpddError, ValueError):
    """An experiment configuration is malformed."""


class CombinatorialBudgetError(GpddError, ValueError):
    """Exact leave-k-out enumeration would exceed the evaluation budget."""


class GridPointError(GpddError):
    """A module error annotated with the sweep coordinates where it occurred."""

    def __init__(self, cause: Exception, n: int, d: int, gamma: float, lam: Optional[float] = None):
        self.cause = cause
        self.n = n
        self.d = d
        self.gamma = gamma
        self.lam = lam
        where = f"n={n}, d={d}, gamma={gamma:g}"
        if lam is not None:
            where += f", lambda={lam:g}"
        super().__init__(f"{type(cause).__name__} at {where}: {cause}")
