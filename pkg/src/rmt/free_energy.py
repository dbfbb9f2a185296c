"""Gram-matrix limits, the limiting Bayes free energy and its closed-form optima.

A smooth kernel's Gram matrix behaves like alpha X X^T / d + beta I in the
proportional regime d/n -> c, so every limit below depends on the data only
through (alpha, beta, c) and on the ridge only through

    mu_arg = (beta + ridge) / alpha.

Two conventions for beta are supported:

* fixed:     beta is a constant of the kernel
* lambda-scaled: beta = beta0 * lambda, the setting where the optimal lambda
  has a closed form (it exists only for gamma + beta0 < 1)
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from src.config.config import GOLDEN_BRACKET
from src.rmt.limits import _logdet_raw, _trace_raw
from src.utils.errors import DomainError, NoOptimalLambda
from src.utils.optimize import minimize_scalar
from src.utils.utils import check_positive

logger = logging.getLogger("gpdd.rmt")


@dataclass(frozen=True)
class RmtContext:
    """Inputs shared by every limit formula.

    Attributes:
        alpha: kernel slope, > 0
        c: limit ratio d/n, > 0
        beta: fixed kernel offset (ignored when beta0 is set)
        beta0: lambda-scaled offset, beta = beta0 * lambda; an optimum needs beta0 < 1
        mu_arg: effective argument (beta + ridge)/alpha of the Gram limits
    """

    alpha: float
    c: float
    beta: float = 0.0
    beta0: Optional[float] = None
    mu_arg: Optional[float] = None

    def __post_init__(self):
        check_positive("alpha", self.alpha)
        check_positive("c", self.c)
        if not math.isfinite(self.beta):
            raise DomainError(f"beta must be finite, got {self.beta!r}")
        # beta0 >= 1 is representable; optimal_lambda then has no window
        if self.beta0 is not None and not (math.isfinite(self.beta0) and self.beta0 >= 0.0):
            raise DomainError(f"beta0 must be finite and >= 0, got {self.beta0!r}")
        if self.mu_arg is not None:
            check_positive("mu_arg", self.mu_arg)

    @property
    def scaled(self) -> bool:
        return self.beta0 is not None

    def beta_at(self, lam: float) -> float:
        """Kernel offset in force at regularization lam."""
        return self.beta0 * lam if self.scaled else self.beta

    def with_ridge(self, ridge: float, lam: Optional[float] = None) -> "RmtContext":
        """Copy with mu_arg = (beta + ridge)/alpha; lam is needed in scaled mode."""
        if self.scaled and lam is None:
            raise DomainError("lambda-scaled context needs lambda to resolve beta")
        beta = self.beta_at(lam) if self.scaled else self.beta
        mu_arg = (beta + ridge) / self.alpha
        if not mu_arg > 0.0:
            raise DomainError(f"beta + ridge must be > 0, got beta={beta:g}, ridge={ridge:g}")
        return replace(self, mu_arg=mu_arg)


def _require_mu_arg(ctx: RmtContext) -> float:
    if ctx.mu_arg is None:
        raise DomainError("context has no mu_arg; build it with RmtContext.with_ridge")
    return ctx.mu_arg


def gram_trace_limit(ctx: RmtContext) -> float:
    """lim n^-1 E tr((K_X + ridge I)^-1)."""
    mu_arg = _require_mu_arg(ctx)
    t = _trace_raw(mu_arg, ctx.c)
    if ctx.c <= 1.0:
        # (1-c)/(beta + ridge) with beta + ridge = alpha * mu_arg
        return (1.0 - ctx.c) / (ctx.alpha * mu_arg) + t / ctx.alpha
    return t / ctx.alpha


def gram_logdet_limit(ctx: RmtContext) -> float:
    """lim n^-1 E log det(K_X + ridge I)."""
    mu_arg = _require_mu_arg(ctx)
    d = _logdet_raw(mu_arg, ctx.c)
    if ctx.c <= 1.0:
        return d + (1.0 - ctx.c) * math.log(mu_arg) + math.log(ctx.alpha)
    return d + math.log(ctx.alpha)


def limiting_free_energy(lam: float, gamma: float, ctx: RmtContext) -> float:
    """F_inf^gamma = lim n^-1 E F_n^gamma for standard-normal labels and whitened inputs."""
    lam = check_positive("lambda", lam)
    gamma = check_positive("gamma", gamma)
    resolved = ctx.with_ridge(lam * gamma, lam=lam)
    return (
        0.5 * lam * gram_trace_limit(resolved)
        + 0.5 * gram_logdet_limit(resolved)
        - 0.5 * math.log(lam / (2.0 * math.pi))
    )


def optimal_gamma(mu: float, ctx: RmtContext) -> float:
    """Temperature minimizing F_inf^gamma along lambda = mu/gamma (fixed beta).

    gamma* = mu/(2(beta+mu)) [1 - c - c(beta+mu)/alpha + sqrt((c(beta+mu)/alpha + c + 1)^2 - 4c)],
    evaluated as mu times the limiting Gram trace at ridge mu, which is the same
    quantity without cancellation.
    """
    mu = check_positive("mu", mu)
    if ctx.scaled:
        raise DomainError("optimal_gamma needs a fixed-beta context (beta would vary with gamma)")
    return mu * gram_trace_limit(ctx.with_ridge(mu))


def optimal_gamma_alternative(mu: float, ctx: RmtContext) -> float:
    """The alternative closed form without the mu/(2(beta+mu)) prefactor.

    Kept so the validation suite can show which form matches a numeric minimizer.
    """
    mu = check_positive("mu", mu)
    a, b, c = ctx.alpha, ctx.beta, ctx.c
    return c - 1.0 - (c / a) * (b + mu) + math.sqrt((1.0 + (c / a) * (b + mu + a)) ** 2 - 4.0 * c)


def _beta0(ctx: RmtContext) -> float:
    if not ctx.scaled:
        raise DomainError("optimal_lambda needs a lambda-scaled context (beta0 set)")
    return ctx.beta0


def optimal_mu(gamma0: float, c: float) -> float:
    """Positive root mu* of c^2(1-g^2) mu^2 - 2 c mu (c+1) g^2 - (c-1)^2 g^2 = 0, g = gamma0 < 1."""
    gamma0 = check_positive("gamma0", gamma0)
    c = check_positive("c", c)
    if gamma0 >= 1.0:
        raise DomainError(f"no positive root for gamma0 >= 1, got {gamma0:g}")
    g2 = gamma0 * gamma0
    return ((c + 1.0) * g2 + gamma0 * math.sqrt((c - 1.0) ** 2 + 4.0 * c * g2)) / (c * (1.0 - g2))


def critical_point_residual(mu: float, gamma0: float, c: float) -> float:
    """Left side of the quadratic whose positive root is mu*."""
    g2 = gamma0 * gamma0
    return c * c * (1.0 - g2) * mu * mu - 2.0 * c * mu * (c + 1.0) * g2 - (c - 1.0) ** 2 * g2


def optimal_lambda(gamma: float, ctx: RmtContext) -> float:
    """Regularization minimizing F_inf^gamma when beta = beta0 * lambda.

    lambda* = alpha[(c+1) g + sqrt((c-1)^2 + 4 c g^2)] / (c (1 - g^2)),  g = gamma + beta0

    Raises:
        NoOptimalLambda: when gamma >= 1 - beta0
    """
    gamma = check_positive("gamma", gamma)
    beta0 = _beta0(ctx)
    gamma0 = gamma + beta0
    if gamma0 >= 1.0:
        raise NoOptimalLambda(gamma, beta0)
    c = ctx.c
    lam = ctx.alpha * (
        (c + 1.0) * gamma0 + math.sqrt((c - 1.0) ** 2 + 4.0 * c * gamma0 * gamma0)
    ) / (c * (1.0 - gamma0 * gamma0))
    logger.debug(f"lambda*(gamma={gamma:g}, beta0={beta0:g}, c={c:g}) = {lam:.12g}")
    return lam


def optimal_lambda_fixed_beta(gamma: float, ctx: RmtContext) -> float:
    """Regularization minimizing F_inf^gamma for a kernel whose offset beta does not move with lambda.

    beta = 0 is the lambda-scaled model with beta0 = 0 and uses the closed form.
    Otherwise a golden-section search in log lambda over alpha * GOLDEN_BRACKET.

    Raises:
        NoOptimalLambda: the search ends in the top decade of the bracket
    """
    gamma = check_positive("gamma", gamma)
    if ctx.scaled:
        raise DomainError("optimal_lambda_fixed_beta needs a fixed-beta context (beta0 unset)")
    if ctx.beta == 0.0:
        return optimal_lambda(gamma, replace(ctx, beta0=0.0))
    lo, hi = (ctx.alpha * b for b in GOLDEN_BRACKET)
    lam, value = minimize_scalar(lambda x: limiting_free_energy(x, gamma, ctx), lo, hi, log_scale=True)
    if lam >= hi / 10.0:
        raise NoOptimalLambda(gamma, ctx.beta, fixed_beta=True)
    logger.debug(f"fixed-beta lambda(gamma={gamma:g}, beta={ctx.beta:g}, c={ctx.c:g}) = {lam:.12g}, F_inf={value:.12g}")
    return lam


def policy_lambda(gamma: float, ctx: RmtContext) -> float:
    """Optimal lambda under the context's offset convention.

    lambda-scaled contexts use the closed form, fixed-beta contexts the numeric minimizer.
    """
    if ctx.scaled:
        return optimal_lambda(gamma, ctx)
    return optimal_lambda_fixed_beta(gamma, ctx)


def limiting_free_energy_curve(
    c_values: np.ndarray,
    gamma: float,
    alpha: float,
    beta: float = 0.0,
    lam: Optional[float] = None,
    scaled: bool = False,
) -> np.ndarray:
    """F_inf over a grid of c at fixed gamma.

    lam=None selects lambda* at every c (requires scaled=True semantics, with
    beta read as beta0); otherwise lam is held fixed. Grid points without an
    optimum come back as NaN.
    """
    out = np.empty(len(c_values), dtype=float)
    for i, c in enumerate(c_values):
        if scaled or lam is None:
            ctx = RmtContext(alpha=alpha, c=float(c), beta0=beta)
        else:
            ctx = RmtContext(alpha=alpha, c=float(c), beta=beta)
        try:
            lam_i = optimal_lambda(gamma, ctx) if lam is None else lam
        except NoOptimalLambda:
            out[i] = np.nan
            continue
        out[i] = limiting_free_energy(lam_i, gamma, ctx)
    return out
