"""Linearization coefficients (alpha, beta) and the lambda-scaled bandwidth transform.

For whitened inputs with per-coordinate variance sigma2, a smooth kernel's
Gram matrix is close in spectral norm to alpha X X^T/d + beta I (plus a
finite-rank term that does not move normalized traces):

    inner-product: alpha = kappa'(0),             beta = kappa(s2) - kappa(0) - kappa'(0) s2
    radial:        alpha = -2 kappa'(2 s2),       beta = kappa(0) + 2 s2 kappa'(2 s2) - kappa(2 s2)
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from src.kernels.families import kappa, kappa_prime
from src.kernels.spec import INNER_PRODUCT, KernelSpec
from src.rmt import RmtContext, policy_lambda
from src.utils.errors import DegenerateKernel, DomainError, NotLambdaScalable
from src.utils.utils import check_positive

logger = logging.getLogger("gpdd.kernels")

LAMBDA_POLICIES = ("plug-in", "lambda-scaled")

_SCALE_RTOL = 1e-9
_SCALE_ATOL = 1e-12


def coefficients(spec: KernelSpec, sigma2: float = 1.0) -> Tuple[float, float]:
    """(alpha, beta) of the spec at input variance sigma2.

    Raises:
        DegenerateKernel: alpha <= 0 (kappa'(0) <= 0 or kappa'(2 sigma2) >= 0)
    """
    s2 = check_positive("sigma2", sigma2)
    if spec.kind == INNER_PRODUCT:
        d0 = float(kappa_prime(spec, 0.0))
        alpha = d0
        beta = float(kappa(spec, s2)) - float(kappa(spec, 0.0)) - d0 * s2
    else:
        d2 = float(kappa_prime(spec, 2.0 * s2))
        alpha = -2.0 * d2
        beta = float(kappa(spec, 0.0)) + 2.0 * s2 * d2 - float(kappa(spec, 2.0 * s2))
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise DegenerateKernel(f"{spec.id}: linearization slope alpha={alpha:g} is not positive")
    if not math.isfinite(beta):
        raise DegenerateKernel(f"{spec.id}: linearization offset beta={beta!r} is not finite")
    return alpha, beta


def rescale_bandwidth(spec: KernelSpec, lam: float, sigma2: float = 1.0) -> Tuple[KernelSpec, float, float]:
    """The spec with eta = lam, and its (alpha, beta0 = beta(lam)/lam).

    alpha and beta/lam are checked at lam and 2 lam; the transform is only
    meaningful when both are constant.

    Raises:
        NotLambdaScalable: alpha or beta/lam changes with lam
    """
    lam = check_positive("lambda", lam)
    scaled = spec.with_eta(lam)
    a1, b1 = coefficients(scaled, sigma2)
    a2, b2 = coefficients(spec.with_eta(2.0 * lam), sigma2)
    if not math.isclose(a1, a2, rel_tol=_SCALE_RTOL, abs_tol=_SCALE_ATOL):
        raise NotLambdaScalable(
            f"{spec.family}: alpha changes with lambda ({a1:.12g} at {lam:g}, {a2:.12g} at {2 * lam:g})"
        )
    beta0 = b1 / lam
    if not math.isclose(beta0, b2 / (2.0 * lam), rel_tol=_SCALE_RTOL, abs_tol=_SCALE_ATOL):
        raise NotLambdaScalable(
            f"{spec.family}: beta/lambda changes with lambda ({beta0:.12g} vs {b2 / (2 * lam):.12g})"
        )
    return scaled, a1, beta0


@dataclass(frozen=True)
class PolicyKernel:
    """How a kernel enters the optimal-lambda search.

    plug-in keeps the kernel fixed, so its offset beta stays put as lambda
    moves; lambda-scaled evaluates the kernel at eta = lambda, where
    beta = beta0 * lambda.
    """

    base: KernelSpec
    policy: str
    alpha: float
    beta: float = 0.0
    beta0: Optional[float] = None

    def spec_at(self, lam: float) -> KernelSpec:
        if self.policy == "lambda-scaled":
            return self.base.with_eta(lam)
        return self.base

    def context(self, c: float) -> RmtContext:
        return RmtContext(alpha=self.alpha, c=c, beta=self.beta, beta0=self.beta0)

    def optimal_lambda(self, gamma: float, c: float) -> float:
        """Minimizer of F_inf^gamma at ratio c under this policy.

        Raises:
            NoOptimalLambda: F_inf has no minimizer in lambda
        """
        return policy_lambda(gamma, self.context(c))


def kernel_from_lambda_policy(spec: KernelSpec, policy: str = "plug-in") -> PolicyKernel:
    """Resolve (alpha, beta) or (alpha, beta0) for the optimal-lambda policy."""
    if policy == "plug-in":
        alpha, beta = coefficients(spec, 1.0)
        if beta < 0.0:
            raise DomainError(f"{spec.id}: plug-in offset beta={beta:g} is negative")
        return PolicyKernel(base=spec, policy=policy, alpha=alpha, beta=beta)
    if policy == "lambda-scaled":
        _, alpha, beta0 = rescale_bandwidth(spec, 1.0)
        return PolicyKernel(base=spec, policy=policy, alpha=alpha, beta0=beta0)
    raise DomainError(f"unknown lambda policy {policy!r}; expected one of {LAMBDA_POLICIES}")
