"""Marchenko-Pastur limits of normalized traces and log-determinants.

T(mu, c)  = lim n^-1 E tr((X^T X / d + mu I)^-1),  c <= 1
T~(mu, c) = lim n^-1 E tr((X X^T / d + mu I)^-1),  c > 1

and D, D~ the matching limits of n^-1 E log det. c = 1 belongs to the
c <= 1 branch; both branch formulas agree there.
"""
import logging
import math

from scipy import integrate

from src.config.config import QUAD_EPSABS, QUAD_EPSREL, QUAD_LIMIT
from src.utils.errors import DomainError
from src.utils.utils import check_positive

logger = logging.getLogger("gpdd.rmt")


def _discriminant_root(mu: float, c: float) -> float:
    # sqrt((c mu + c + 1)^2 - 4c) as a sum of nonnegative terms
    return math.sqrt(c * c * mu * mu + 2.0 * c * mu * (c + 1.0) + (c - 1.0) ** 2)


def mp_stieltjes(z: float, c: float) -> float:
    """Stieltjes transform m(z) of the Marchenko-Pastur law on the negative real axis."""
    z = float(z)
    if not math.isfinite(z) or z >= 0.0:
        raise DomainError(f"mp_stieltjes is evaluated only for z < 0, got {z!r}")
    c = check_positive("c", c)
    root = math.sqrt(z * z - 2.0 * z * (c + 1.0) + (c - 1.0) ** 2)
    # m = 2/(1 - c - z + root); the sum is rewritten when 1 - c - z < 0
    s = 1.0 - c - z
    if s >= 0.0:
        return 2.0 / (s + root)
    return 2.0 * (root - s) / (-4.0 * c * z)


def _trace_raw(mu: float, c: float) -> float:
    # rationalized forms; the textbook numerators cancel badly for large mu
    root = _discriminant_root(mu, c)
    if c <= 1.0:
        return 2.0 * c * c / (root + c * mu + 1.0 - c)
    return 2.0 * c / (root + c * mu + c - 1.0)


def trace_limit(mu: float, c: float) -> float:
    """T(mu, c) for c <= 1, T~(mu, c) for c > 1."""
    mu = check_positive("mu", mu)
    c = check_positive("c", c)
    return _trace_raw(mu, c)


def trace_limit_fixed_point_residual(mu: float, c: float) -> float:
    """Residual of T = c^2/(1 - c + c mu + mu T) (c <= 1) or T~ = c/(c - 1 + c mu + mu T~) (c > 1)."""
    t = trace_limit(mu, c)
    if c <= 1.0:
        return t - c * c / (1.0 - c + c * mu + mu * t)
    return t - c / (c - 1.0 + c * mu + mu * t)


def _logdet_raw(mu: float, c: float) -> float:
    t = _trace_raw(mu, c)
    if c <= 1.0:
        return math.log1p(t / c) - t / (c + t) - c * math.log(t / c)
    return c * math.log1p(t / c) - c * t / (c + t) - math.log(t)


def logdet_limit(mu: float, c: float) -> float:
    """D(mu, c) for c <= 1, D~(mu, c) for c > 1, in closed form."""
    mu = check_positive("mu", mu)
    c = check_positive("c", c)
    return _logdet_raw(mu, c)


def _xlogx(x: float) -> float:
    return 0.0 if x == 0.0 else x * math.log(x)


def logdet_limit_quadrature(mu: float, c: float) -> float:
    """D / D~ from the integral representation, as an independent check of logdet_limit.

    D(mu, c)  = (c-1) log(1-c) - c log c - c + int_0^mu T(t, c) dt
    D~(mu, c) = (1-c) log(c-1) + (c-1) log c - 1 + int_0^mu T~(t, c) dt

    The integral is taken in s = sqrt(t) because T(t, 1) ~ t^-1/2 at 0.
    """
    mu = check_positive("mu", mu)
    c = check_positive("c", c)

    def integrand(s: float) -> float:
        return 2.0 * s * _trace_raw(s * s, c)

    integral, abserr = integrate.quad(
        integrand, 0.0, math.sqrt(mu),
        epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT,
    )
    logger.debug(f"quadrature D(mu={mu:g}, c={c:g}): integral={integral:.12g} abserr={abserr:.2e}")

    if c <= 1.0:
        # (c-1) log(1-c) written as -(1-c) log(1-c), zero at c = 1
        return -_xlogx(1.0 - c) - c * math.log(c) - c + integral
    return -_xlogx(c - 1.0) + (c - 1.0) * math.log(c) - 1.0 + integral
