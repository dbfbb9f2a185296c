"""Scalar profiles kappa and their derivatives for each kernel family.

Every profile is vectorized over t and takes the family parameters as
keywords. Radial profiles receive t = ||x - x'||^2 / d.
"""
import math

import numpy as np
from scipy import special

from src.utils.errors import DomainError


def linear(t, **_):
    return np.asarray(t, dtype=float)


def linear_prime(t, **_):
    return np.ones_like(np.asarray(t, dtype=float))


def polynomial(t, offset, degree, **_):
    return (offset + np.asarray(t, dtype=float)) ** degree


def polynomial_prime(t, offset, degree, **_):
    return degree * (offset + np.asarray(t, dtype=float)) ** (degree - 1)


def exponential(t, **_):
    return np.exp(t)


def exponential_prime(t, **_):
    return np.exp(t)


def gaussian(t, **_):
    return np.exp(-np.asarray(t, dtype=float))


def gaussian_prime(t, **_):
    return -np.exp(-np.asarray(t, dtype=float))


def multiquadric(t, offset, power, **_):
    return (offset + np.asarray(t, dtype=float)) ** power


def multiquadric_prime(t, offset, power, **_):
    return power * (offset + np.asarray(t, dtype=float)) ** (power - 1.0)


def inverse_multiquadric(t, offset, power, **_):
    return (offset + np.asarray(t, dtype=float)) ** (-power)


def inverse_multiquadric_prime(t, offset, power, **_):
    return -power * (offset + np.asarray(t, dtype=float)) ** (-power - 1.0)


def _matern_scale(nu, length_scale):
    return 1.0 if length_scale is None else math.sqrt(2.0 * nu) / length_scale


def _log_norm(nu):
    # log(2^(nu-1) Gamma(nu))
    return (nu - 1.0) * math.log(2.0) + special.gammaln(nu)


def matern_profile(x, nu):
    """m(x) = x^nu K_nu(x) / (2^(nu-1) Gamma(nu)), with m(0) = 1."""
    x = np.asarray(x, dtype=float)
    if nu == 0.5:
        return np.exp(-x)
    if nu == 1.5:
        return (1.0 + x) * np.exp(-x)
    if nu == 2.5:
        return (1.0 + x + x * x / 3.0) * np.exp(-x)
    out = np.ones_like(x)
    pos = x > 0.0
    xp = x[pos]
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        logm = nu * np.log(xp) + np.log(special.kve(nu, xp)) - xp - _log_norm(nu)
        vals = np.exp(logm)
    # K_nu overflows near 0 for large nu; m is 1 - x^2/(4(nu-1)) + ... there
    bad = ~np.isfinite(vals)
    if np.any(bad):
        small = xp[bad]
        vals[bad] = np.exp(-small * small / (4.0 * (nu - 1.0))) if nu > 1.0 else 1.0
    out[pos] = vals
    return out


def matern_profile_prime(x, nu):
    """m'(x) = -x^nu K_(nu-1)(x) / (2^(nu-1) Gamma(nu)) for x > 0."""
    x = np.asarray(x, dtype=float)
    if nu == 0.5:
        return -np.exp(-x)
    if nu == 1.5:
        return -x * np.exp(-x)
    if nu == 2.5:
        return -x * (1.0 + x) * np.exp(-x) / 3.0
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        logm = nu * np.log(x) + np.log(special.kve(nu - 1.0, x)) - x - _log_norm(nu)
        out = -np.exp(logm)
    bad = ~np.isfinite(out)
    if np.any(bad):
        if nu <= 1.0:
            raise DomainError(f"matern derivative diverges near 0 for nu={nu:g}")
        small = x[bad]
        out[bad] = -small / (2.0 * (nu - 1.0)) * np.exp(-small * small / (4.0 * (nu - 1.0)))
    return out


def matern(t, nu, length_scale=None, **_):
    s = _matern_scale(nu, length_scale)
    return matern_profile(s * np.sqrt(np.asarray(t, dtype=float)), nu)


def matern_prime(t, nu, length_scale=None, **_):
    """d/dt of m(s sqrt(t)); defined for t > 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0):
        raise DomainError("matern profile is differentiated only at t > 0")
    s = _matern_scale(nu, length_scale)
    root = np.sqrt(t)
    return matern_profile_prime(s * root, nu) * s / (2.0 * root)


PROFILES = {
    "linear": (linear, linear_prime),
    "polynomial": (polynomial, polynomial_prime),
    "exponential": (exponential, exponential_prime),
    "gaussian": (gaussian, gaussian_prime),
    "multiquadric": (multiquadric, multiquadric_prime),
    "inverse-multiquadric": (inverse_multiquadric, inverse_multiquadric_prime),
    "matern": (matern, matern_prime),
}


def kappa(spec, t):
    """kappa_eta(t) = kappa(eta t) / eta."""
    fn, _ = PROFILES[spec.family]
    return fn(spec.eta * np.asarray(t, dtype=float), **spec.params) / spec.eta


def kappa_prime(spec, t):
    """kappa_eta'(t) = kappa'(eta t)."""
    _, fn = PROFILES[spec.family]
    return fn(spec.eta * np.asarray(t, dtype=float), **spec.params)
