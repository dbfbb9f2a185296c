"""Digamma function and the summation identities built on it.

psi is reduced by the recurrence psi(z) = psi(z + 1) - 1/z until z >= 10,
then evaluated with the asymptotic series

    psi(z) ~ log z - 1/(2z) - sum_k B_2k / (2k z^2k)

through z^-14. Sign convention: psi(1) = -EULER_GAMMA.
"""
import logging
import math
from typing import Union

import numpy as np

from src.utils.errors import DomainError

logger = logging.getLogger("gpdd.specfun")

EULER_GAMMA = 0.57721566490153286061

# B_2k / (2k) for k = 1..7
_ASYMPTOTIC_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

_SHIFT_TARGET = 10.0

ArrayLike = Union[float, np.ndarray]


def _check_args(z: np.ndarray) -> None:
    if not np.all(np.isfinite(z)):
        raise DomainError("digamma argument must be finite")
    if np.any(z <= 0.0):
        bad = float(np.min(z))
        raise DomainError(f"digamma is only evaluated for z > 0, got {bad!r}")


def digamma(z: ArrayLike) -> ArrayLike:
    """psi(z) for z > 0, scalar or elementwise over an array.

    Raises:
        DomainError: for z <= 0 or non-finite z
    """
    arr = np.array(z, dtype=float, copy=True)
    _check_args(arr)

    acc = np.zeros_like(arr)
    mask = arr < _SHIFT_TARGET
    while np.any(mask):
        acc[mask] -= 1.0 / arr[mask]
        arr[mask] += 1.0
        mask = arr < _SHIFT_TARGET

    inv2 = 1.0 / (arr * arr)
    series = np.zeros_like(arr)
    for coeff in reversed(_ASYMPTOTIC_COEFFS):
        series = (series + coeff) * inv2
    out = acc + np.log(arr) - 0.5 / arr - series

    if out.ndim == 0:
        return float(out)
    return out


def _check_count(name: str, value: int, minimum: int = 1) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return value


def _check_real(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


def sum_digamma(n: int, z: float) -> float:
    """Closed form of sum_{i=1}^n psi(z + i) = (n+z) psi(n+z) - z psi(z) - n."""
    n = _check_count("n", n)
    z = _check_real("z", z)
    return (n + z) * digamma(n + z) - z * digamma(z) - n


def sum_digamma_direct(n: int, z: float) -> float:
    """sum_{i=1}^n psi(z + i) by direct summation."""
    n = _check_count("n", n)
    z = _check_real("z", z)
    return float(np.sum(digamma(z + np.arange(1, n + 1, dtype=float))))


def sum_digamma_half_direct(n: int, d: int) -> float:
    """sum_{i=1}^d psi((n - i + 1) / 2), requires n >= d >= 1."""
    d = _check_count("d", d)
    n = _check_count("n", n)
    if n < d:
        raise DomainError(f"requires n >= d, got n={n}, d={d}")
    args = (n - np.arange(1, d + 1, dtype=float) + 1.0) / 2.0
    return float(np.sum(digamma(args)))


def sum_digamma_half_closed(n: int, d: int) -> float:
    """Closed form of sum_{i=1}^d psi((n - i + 1) / 2).

    Only valid for n >= d + 2: at n = d + 1 the last term is x psi(x) at x = 0,
    whose one-sided limit is -1, not 0, so the boundary case is refused.
    """
    d = _check_count("d", d)
    n = _check_count("n", n)
    if n < d + 2:
        raise DomainError(f"closed form requires n >= d + 2, got n={n}, d={d}")

    def x_psi(x: float) -> float:
        return x * digamma(x)

    return (
        x_psi(n / 2.0)
        - x_psi((n - d) / 2.0)
        - d
        + x_psi((n - 1) / 2.0)
        - x_psi((n - d - 1) / 2.0)
    )


def sum_digamma_half(n: int, d: int) -> float:
    """sum_{i=1}^d psi((n - i + 1) / 2) for n > d >= 1.

    Uses the closed form when n >= d + 2 and the direct sum at n = d + 1.
    """
    d = _check_count("d", d)
    n = _check_count("n", n)
    if n <= d:
        raise DomainError(f"requires n > d, got n={n}, d={d}")
    if n - d - 1 <= 1:
        return sum_digamma_half_direct(n, d)
    return sum_digamma_half_closed(n, d)


def expected_logdet_wishart(n: int, d: int) -> float:
    """E log det(W^T W) = d log 2 + sum_{i=1}^d psi((n - i + 1)/2) for W an n x d standard Gaussian."""
    d = _check_count("d", d)
    n = _check_count("n", n)
    if d > n:
        raise DomainError(f"expected log-determinant requires d <= n, got n={n}, d={d}")
    return d * math.log(2.0) + sum_digamma_half_direct(n, d)
