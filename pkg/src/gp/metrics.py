"""Exact finite-n GP quantities: free energy, posterior predictive and its losses.

Every solve and log-determinant goes through one Cholesky factor of
K + lam*gamma*I; no inverse is formed and no jitter is added.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from src.config.config import GOLDEN_BRACKET
from src.gp.hyper import HyperParams
from src.utils.errors import DomainError, FactorizationFailure
from src.utils.optimize import minimize_scalar
from src.utils.utils import check_positive

logger = logging.getLogger("gpdd.gp")

LOG_2PI = math.log(2.0 * math.pi)


def _cholesky(A: np.ndarray, what: str = "K + lambda*gamma*I") -> np.ndarray:
    """Lower Cholesky factor, or FactorizationFailure."""
    if A.size and not np.all(np.isfinite(A)):
        raise FactorizationFailure(f"{what} has non-finite entries")
    try:
        return linalg.cholesky(A, lower=True, check_finite=False)
    except linalg.LinAlgError as e:
        raise FactorizationFailure(f"{what} is not numerically positive definite: {e}") from e


def _factor(K: np.ndarray, hp: HyperParams) -> np.ndarray:
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DomainError(f"K must be square, got shape {K.shape}")
    return _cholesky(K + hp.ridge * np.eye(K.shape[0]))


def _logdet(L: np.ndarray) -> float:
    return 2.0 * float(np.sum(np.log(np.diag(L))))


def _check_labels(Y, n: int) -> np.ndarray:
    Y = np.asarray(Y, dtype=float).ravel()
    if Y.shape[0] != n:
        raise DomainError(f"expected {n} labels, got {Y.shape[0]}")
    return Y


@dataclass(frozen=True)
class FreeEnergyTerms:
    """Pieces of the free energy: Y^T Q Y, tr Q and log det(K + lam*gamma*I), Q = (K + lam*gamma*I)^-1."""

    quad: float
    trace: float
    logdet: float
    n: int

    def free_energy(self, lam: float, label_scale: float = 1.0) -> float:
        """Free energy with labels multiplied by sqrt(label_scale)."""
        return (
            0.5 * lam * label_scale * self.quad
            + 0.5 * self.logdet
            - 0.5 * self.n * math.log(lam / (2.0 * math.pi))
        )


def free_energy_terms(K, Y, hp: HyperParams) -> FreeEnergyTerms:
    L = _factor(K, hp)
    n = L.shape[0]
    Y = _check_labels(Y, n)
    z = linalg.solve_triangular(L, Y, lower=True, check_finite=False)
    Linv = linalg.solve_triangular(L, np.eye(n), lower=True, check_finite=False)
    return FreeEnergyTerms(
        quad=float(z @ z),
        trace=float(np.sum(Linv * Linv)),
        logdet=_logdet(L),
        n=n,
    )


def free_energy(K, Y, hp: HyperParams) -> float:
    """F = lam/2 Y^T (K + lam gamma I)^-1 Y + 1/2 log det(K + lam gamma I) - n/2 log(lam/2pi).

    Equals -log N(Y; 0, K/lam + gamma I).

    Raises:
        FactorizationFailure: K + lam*gamma*I is not numerically positive definite
    """
    L = _factor(K, hp)
    n = L.shape[0]
    Y = _check_labels(Y, n)
    z = linalg.solve_triangular(L, Y, lower=True, check_finite=False)
    return 0.5 * hp.lam * float(z @ z) + 0.5 * _logdet(L) - 0.5 * n * math.log(hp.lam / (2.0 * math.pi))


@dataclass(frozen=True)
class PosteriorPredictive:
    """f(x) | X, Y ~ N(mean, cov) with cov = raw_sigma / lam."""

    mean: np.ndarray
    cov: np.ndarray
    raw_sigma: np.ndarray

    @property
    def m(self) -> int:
        return self.mean.shape[0]


def posterior_predictive(K, k_x, K_x, Y, hp: HyperParams) -> PosteriorPredictive:
    """Posterior predictive at m test points.

    Args:
        K: n x n training Gram matrix
        k_x: n x m cross Gram matrix k(X_i, x_j)
        K_x: m x m test Gram matrix
        Y: n training labels
        hp: hyperparameters
    """
    K_x = np.asarray(K_x, dtype=float)
    k_x = np.asarray(k_x, dtype=float)
    m = K_x.shape[0]
    K = np.asarray(K, dtype=float)
    n = K.shape[0] if K.ndim == 2 else 0
    if n == 0:
        raw = 0.5 * (K_x + K_x.T)
        return PosteriorPredictive(mean=np.zeros(m), cov=raw / hp.lam, raw_sigma=raw)
    if k_x.shape != (n, m):
        raise DomainError(f"k_x must have shape ({n}, {m}), got {k_x.shape}")
    L = _factor(K, hp)
    Y = _check_labels(Y, n)
    weights = linalg.cho_solve((L, True), Y, check_finite=False)
    V = linalg.solve_triangular(L, k_x, lower=True, check_finite=False)
    raw = K_x - V.T @ V
    raw = 0.5 * (raw + raw.T)
    return PosteriorPredictive(mean=k_x.T @ weights, cov=raw / hp.lam, raw_sigma=raw)


def _residual(pp: PosteriorPredictive, y) -> np.ndarray:
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] != pp.m:
        raise DomainError(f"expected {pp.m} test labels, got {y.shape[0]}")
    return pp.mean - y


def ppl2(pp: PosteriorPredictive, y, hp: HyperParams) -> float:
    """||mean - y||^2 + tr(raw_sigma)/lam."""
    r = _residual(pp, y)
    return float(r @ r) + float(np.trace(pp.raw_sigma)) / hp.lam


def ppnll(pp: PosteriorPredictive, y, hp: HyperParams) -> float:
    """||mean - y||^2/(2 gamma) + tr(raw_sigma)/(2 lam gamma) + m/2 log(2 pi gamma)."""
    r = _residual(pp, y)
    g = hp.gamma
    return (
        float(r @ r) / (2.0 * g)
        + float(np.trace(pp.raw_sigma)) / (2.0 * hp.lam * g)
        + 0.5 * pp.m * math.log(2.0 * math.pi * g)
    )


def optimal_ppnll(mse: float, trace_sigma: float, m: int, mu: float) -> Tuple[float, float]:
    """(gamma*, value) for the expected PPNLL minimized over the temperature.

    gamma* = mse/m and value = m/2 [1 + log(2 pi mse)] + trace_sigma/(2 mu), where mse
    is the expected squared error of the posterior mean over the m test points.
    """
    mse = check_positive("mse", mse)
    mu = check_positive("mu", mu)
    if not (math.isfinite(trace_sigma) and trace_sigma >= 0.0):
        raise DomainError(f"trace_sigma must be finite and >= 0, got {trace_sigma!r}")
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    value = 0.5 * m * (1.0 + math.log(2.0 * math.pi * mse)) + trace_sigma / (2.0 * mu)
    return mse / m, value


def log_predictive_density(K, k_x, K_x, Y, y, hp: HyperParams) -> float:
    """log N(y; mean, raw_sigma/lam + gamma I): the marginal predictive density of test labels."""
    pp = posterior_predictive(K, k_x, K_x, Y, hp)
    r = _residual(pp, y)
    C = pp.cov + hp.gamma * np.eye(pp.m)
    L = _cholesky(C, what="predictive covariance")
    z = linalg.solve_triangular(L, r, lower=True, check_finite=False)
    return -0.5 * float(z @ z) - 0.5 * _logdet(L) - 0.5 * pp.m * LOG_2PI


def weight_space_free_energy(X, Y, hp: HyperParams) -> float:
    """-log of int N(Y; X w/sqrt(d), gamma I) N(w; 0, I/lam) dw, computed in d dimensions.

    The function-space free energy of the linear kernel must agree with it.
    """
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    Y = _check_labels(Y, n)
    g, lam = hp.gamma, hp.lam
    Xs = X / math.sqrt(d)
    P = lam * np.eye(d) + (Xs.T @ Xs) / g
    L = _cholesky(P, what="weight-space posterior precision")
    b = Xs.T @ Y / g
    z = linalg.solve_triangular(L, b, lower=True, check_finite=False)
    return (
        0.5 * (float(Y @ Y) / g - float(z @ z))
        + 0.5 * _logdet(L)
        - 0.5 * d * math.log(lam)
        + 0.5 * n * math.log(2.0 * math.pi * g)
    )


def evidence_optimal_lambda(
    K, Y, gamma: float, bracket: Optional[Tuple[float, float]] = None, xtol: float = 1e-9
) -> Tuple[float, float]:
    """Empirical-Bayes lambda: (argmin, min) of the finite-n free energy at fixed gamma.

    Searched in log lambda by golden section over the bracket.
    """
    gamma = check_positive("gamma", gamma)
    lo, hi = bracket or GOLDEN_BRACKET
    K = np.asarray(K, dtype=float)
    Y = np.asarray(Y, dtype=float)

    def objective(lam: float) -> float:
        return free_energy(K, Y, HyperParams(lam=lam, gamma=gamma))

    lam, value = minimize_scalar(objective, lo, hi, log_scale=True, xtol=xtol)
    logger.debug(f"evidence-optimal lambda at gamma={gamma:g}: {lam:.8g} (F={value:.8g})")
    return lam, value
