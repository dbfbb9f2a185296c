"""Synthetic data, augmentation, label misspecification and subsampling.

Every generator is a pure function of its arguments and (seed, stream):
the draws come from make_rng(seed, stream).
"""
import logging
import math
from dataclasses import replace
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from src.config.config import SURROGATE_LABEL_NOISE_SD
from src.data.dataset import Dataset, DatasetMeta
from src.utils.errors import DomainError
from src.utils.utils import check_positive, make_rng

logger = logging.getLogger("gpdd.data")

AUGMENT_MODES = ("gaussian", "copied", "padded")
THETA_MODES = ("small", "large", "growing", "zero")

CovSpec = Union[None, str, Sequence[float], np.ndarray]


def _check_size(name: str, value: int) -> int:
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise DomainError(f"{name} must be an integer >= 1, got {value!r}")
    return int(value)


def _covariance_factor(cov: CovSpec, d: int) -> Optional[np.ndarray]:
    """A with A A^T = Sigma (full), the sqrt of the diagonal (diagonal) or None (identity)."""
    if cov is None or (isinstance(cov, str) and cov == "identity"):
        return None
    if isinstance(cov, str):
        raise DomainError(f"unknown covariance spec {cov!r}")
    C = np.asarray(cov, dtype=float)
    if C.ndim == 1:
        if C.shape[0] != d or np.any(C < 0.0) or not np.all(np.isfinite(C)):
            raise DomainError(f"diagonal covariance needs {d} finite values >= 0")
        return np.sqrt(C)
    if C.shape != (d, d) or not np.all(np.isfinite(C)):
        raise DomainError(f"full covariance must be a finite {d}x{d} matrix, got shape {C.shape}")
    if not np.allclose(C, C.T, rtol=0.0, atol=1e-10 * max(1.0, float(np.max(np.abs(C))))):
        raise DomainError("full covariance is not symmetric")
    w, V = linalg.eigh(C)
    if np.min(w) < -1e-10 * max(1.0, float(np.max(w))):
        raise DomainError(f"full covariance is not positive semidefinite (min eigenvalue {np.min(w):g})")
    return V * np.sqrt(np.clip(w, 0.0, None))


def synth_gaussian(
    n: int,
    d: int,
    cov: CovSpec = "identity",
    label_sd: float = 1.0,
    seed: int = 0,
    stream: Sequence[int] = (),
) -> Dataset:
    """Rows iid N(0, Sigma) and labels iid N(0, label_sd^2).

    cov is "identity", a length-d vector of variances, or a d x d covariance.
    """
    n = _check_size("n", n)
    d = _check_size("d", d)
    label_sd = check_positive("label_sd", label_sd)
    A = _covariance_factor(cov, d)
    rng = make_rng(seed, stream)
    Z = rng.standard_normal((n, d))
    if A is None:
        X = Z
    elif A.ndim == 1:
        X = Z * A
    else:
        X = Z @ A.T
    Y = label_sd * rng.standard_normal(n)
    return Dataset(X, Y, DatasetMeta(seed=seed, whitened=False))


def ill_conditioned_covariance(d: int, high: float = 10.0, low: float = 0.1) -> np.ndarray:
    """Diagonal variances: the first d//2 equal high, the rest low."""
    d = _check_size("d", d)
    high = check_positive("high", high)
    low = check_positive("low", low)
    out = np.full(d, low)
    out[: d // 2] = high
    return out


def surrogate_covariates(
    n: int,
    d: int = 30,
    seed: int = 0,
    stream: Sequence[int] = (),
    noise_sd: float = SURROGATE_LABEL_NOISE_SD,
) -> Dataset:
    """Correlated raw covariates with offsets and a linear-plus-noise label.

    Stands in for a real tabular regression set: columns share a random full
    covariance and nonzero means, so the whitening pipeline has work to do.
    The default label is mostly noise, so after standardization it is close
    to the unit-variance labels the limits assume.
    """
    n = _check_size("n", n)
    d = _check_size("d", d)
    noise_sd = check_positive("noise_sd", noise_sd)
    rng = make_rng(seed, stream)
    B = rng.standard_normal((d, d))
    cov = B @ B.T / d + 0.1 * np.eye(d)
    means = rng.uniform(-5.0, 5.0, size=d)
    scales = rng.uniform(0.5, 20.0, size=d)
    A = linalg.cholesky(cov, lower=True)
    X = (rng.standard_normal((n, d)) @ A.T) * scales + means
    theta = rng.standard_normal(d) / math.sqrt(d)
    Y = ((X - means) / scales) @ theta + noise_sd * rng.standard_normal(n)
    return Dataset(X, Y, DatasetMeta(seed=seed))


def augment(
    ds: Dataset, mode: str, target_d: int, seed: int = 0, stream: Sequence[int] = ()
) -> Dataset:
    """Append columns up to target_d.

    gaussian: iid standard normal; copied: column j repeats column j mod d0;
    padded: zeros.
    """
    if mode not in AUGMENT_MODES:
        raise DomainError(f"unknown augmentation mode {mode!r}; expected one of {AUGMENT_MODES}")
    target_d = _check_size("target_d", target_d)
    n, d0 = ds.X.shape
    if target_d < d0:
        raise DomainError(f"target_d={target_d} is below the current dimension {d0}")
    extra = target_d - d0
    names = list(ds.meta.feature_names)
    retained = list(ds.meta.retained_features)

    if mode == "gaussian":
        new = make_rng(seed, stream).standard_normal((n, extra))
        names += [f"noise{j}" for j in range(d0, target_d)]
        retained += [-1] * extra
    elif mode == "copied":
        src = [j % d0 for j in range(d0, target_d)]
        new = ds.X[:, src]
        names += [f"{ds.meta.feature_names[s]}_copy{j}" for j, s in zip(range(d0, target_d), src)]
        retained += [ds.meta.retained_features[s] for s in src]
    else:
        new = np.zeros((n, extra))
        names += [f"pad{j}" for j in range(d0, target_d)]
        retained += [-1] * extra

    meta = replace(
        ds.meta,
        whitened=ds.meta.whitened and extra == 0,
        feature_names=tuple(names),
        retained_features=tuple(retained),
    )
    return Dataset(np.hstack([ds.X, new]), ds.Y, meta)


def theta0(mode: str, n: int, d: int) -> np.ndarray:
    """Ground-truth weights: small d^-1/2 1, large n d^-1/2 1, growing 1, zero 0."""
    if mode not in THETA_MODES:
        raise DomainError(f"unknown theta mode {mode!r}; expected one of {THETA_MODES}")
    ones = np.ones(d)
    if mode == "small":
        return ones / math.sqrt(d)
    if mode == "large":
        return n * ones / math.sqrt(d)
    if mode == "growing":
        return ones
    return np.zeros(d)


def misspecify_labels(
    ds: Dataset,
    theta_mode: str,
    noise_sd: float = 1.0,
    seed: int = 0,
    stream: Sequence[int] = (),
    n_scale: Optional[int] = None,
) -> Dataset:
    """Replace labels by Y_i = theta0^T X_i + eps_i, eps_i ~ N(0, noise_sd^2).

    n_scale is the n in the "large" theta0 (defaults to ds.n; pass the training
    size when ds also holds test rows).
    """
    noise_sd = check_positive("noise_sd", noise_sd)
    theta = theta0(theta_mode, n_scale or ds.n, ds.d)
    eps = noise_sd * make_rng(seed, stream).standard_normal(ds.n)
    return ds.with_labels(ds.X @ theta + eps)


def misspec_diagnostic(theta) -> Tuple[float, float]:
    """(Var f(Z), lower bound) for f(z) = theta^T z, Z ~ N(0, I): (||theta||^2, (sum theta)^2 / d)."""
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size == 0:
        raise DomainError("theta must have at least one entry")
    return float(theta @ theta), float(np.sum(theta)) ** 2 / theta.size


def subsample(ds: Dataset, n: int, seed: int = 0, stream: Sequence[int] = ()) -> Dataset:
    """n rows drawn without replacement, kept in their original order."""
    n = _check_size("n", n)
    if n > ds.n:
        raise DomainError(f"cannot draw {n} rows from a dataset of {ds.n}")
    rows = np.sort(make_rng(seed, stream).choice(ds.n, size=n, replace=False))
    Y = ds.Y[rows]
    return Dataset(ds.X[rows], Y, replace(ds.meta, whitened=False, label_variance=float(np.var(Y))))
