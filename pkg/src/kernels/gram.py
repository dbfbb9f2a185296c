"""Kernel evaluation and Gram-matrix assembly."""
import logging

import numpy as np
from scipy.spatial import distance

from src.kernels.families import kappa
from src.kernels.spec import INNER_PRODUCT, KernelSpec
from src.utils.errors import DomainError

logger = logging.getLogger("gpdd.kernels")


def _as_matrix(name: str, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] < 1:
        raise DomainError(f"{name} must be a 2-d array with at least one column, got shape {X.shape}")
    return X


def evaluate(spec: KernelSpec, x, x_prime) -> float:
    """k(x, x') for two d-vectors."""
    x = np.asarray(x, dtype=float).ravel()
    x_prime = np.asarray(x_prime, dtype=float).ravel()
    if x.shape != x_prime.shape or x.size == 0:
        raise DomainError(f"dimension mismatch: {x.size} vs {x_prime.size}")
    d = x.size
    if spec.kind == INNER_PRODUCT:
        t = float(x @ x_prime) / d
    else:
        diff = x - x_prime
        t = float(diff @ diff) / d
    return float(kappa(spec, t))


def gram(spec: KernelSpec, X) -> np.ndarray:
    """K_X with entries k(X_i, X_j); exactly symmetric."""
    X = _as_matrix("X", X)
    n, d = X.shape
    if n == 0:
        return np.zeros((0, 0))
    if spec.kind == INNER_PRODUCT:
        t = (X @ X.T) / d
        # one evaluation per unordered pair, mirrored
        iu = np.triu_indices(n)
        K = np.empty((n, n))
        K[iu] = kappa(spec, t[iu])
        K.T[iu] = K[iu]
        return K
    # pdist/squareform is symmetric with an exact zero diagonal
    t = distance.squareform(distance.pdist(X, "sqeuclidean") / d)
    return np.asarray(kappa(spec, t), dtype=float)


def cross_gram(spec: KernelSpec, X, Z) -> np.ndarray:
    """n x m matrix k(X_i, Z_j)."""
    X = _as_matrix("X", X)
    Z = _as_matrix("Z", Z)
    if X.shape[1] != Z.shape[1]:
        raise DomainError(f"dimension mismatch: X has d={X.shape[1]}, Z has d={Z.shape[1]}")
    d = X.shape[1]
    if X.shape[0] == 0 or Z.shape[0] == 0:
        return np.zeros((X.shape[0], Z.shape[0]))
    if spec.kind == INNER_PRODUCT:
        t = (X @ Z.T) / d
    else:
        t = distance.cdist(X, Z, "sqeuclidean") / d
    return np.asarray(kappa(spec, t), dtype=float)


def diag(spec: KernelSpec, X) -> np.ndarray:
    """k(X_i, X_i) without forming the Gram matrix."""
    X = _as_matrix("X", X)
    n, d = X.shape
    if spec.kind == INNER_PRODUCT:
        t = np.einsum("ij,ij->i", X, X) / d
    else:
        t = np.zeros(n)
    return np.asarray(kappa(spec, t), dtype=float)
