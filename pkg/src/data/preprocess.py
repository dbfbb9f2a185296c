"""Whitening and column normalization.

whiten maps rows to Sigma^{-1/2}(x - mean) (ZCA) after dropping columns that
make the sample covariance rank deficient. Covariances use the 1/n divisor,
so the output covariance is exactly the identity up to rounding.
"""
import logging
from typing import Optional, Sequence

import numpy as np
from scipy import linalg

from src.config.config import WHITEN_TOL
from src.data.dataset import LABEL_NAME, Dataset, DatasetMeta, default_feature_names
from src.utils.errors import DegenerateData

logger = logging.getLogger("gpdd.data")


def _inputs(X_raw, Y_raw):
    X = np.asarray(X_raw, dtype=float)
    Y = np.asarray(Y_raw, dtype=float).ravel()
    if X.ndim != 2:
        raise DegenerateData(f"X must be 2-d, got shape {X.shape}")
    if X.shape[0] != Y.shape[0]:
        raise DegenerateData(f"X has {X.shape[0]} rows but Y has {Y.shape[0]} labels")
    if X.shape[0] < 2:
        raise DegenerateData(f"need at least 2 rows, got {X.shape[0]}")
    return X, Y


def _standardize_labels(Y: np.ndarray) -> np.ndarray:
    sd = float(np.std(Y))
    if not sd > 0.0:
        raise DegenerateData("label standard deviation is zero")
    return (Y - Y.mean()) / sd


def _rank(eigenvalues: np.ndarray, tol: float) -> int:
    top = float(np.max(eigenvalues))
    if not top > 0.0:
        return 0
    return int(np.sum(eigenvalues > tol * top))


def whiten(
    X_raw,
    Y_raw,
    tol: float = WHITEN_TOL,
    feature_names: Optional[Sequence[str]] = None,
    label_name: str = LABEL_NAME,
    seed: Optional[int] = None,
) -> Dataset:
    """Center, drop dependent columns, apply the inverse covariance square root, standardize Y.

    Eigendirections with eigenvalue below tol * (largest eigenvalue) count as
    dependent; the retained columns are picked by column-pivoted QR of the
    centered data, so meta.retained_features names original columns.

    Raises:
        DegenerateData: all eigenvalues below tolerance, or zero label SD
    """
    X, Y = _inputs(X_raw, Y_raw)
    n, d = X.shape
    names = tuple(feature_names) if feature_names is not None else default_feature_names(d)

    Xc = X - X.mean(axis=0)
    w = linalg.eigh(Xc.T @ Xc / n, eigvals_only=True)
    r = _rank(w, tol)
    if r == 0:
        raise DegenerateData("every covariance eigenvalue is below the whitening tolerance")

    if r < d:
        _, _, piv = linalg.qr(Xc, mode="economic", pivoting=True)
        retained = sorted(int(j) for j in piv[:r])
        logger.info(f"Whitening dropped {d - r} dependent column(s) of {d}")
    else:
        retained = list(range(d))
    Xr = Xc[:, retained]

    w_r, V = linalg.eigh(Xr.T @ Xr / n)
    if not np.min(w_r) > tol * np.max(w_r):
        raise DegenerateData("retained columns are still rank deficient")
    W = (V / np.sqrt(w_r)) @ V.T
    Xw = Xr @ W

    Yw = _standardize_labels(Y)
    meta = DatasetMeta(
        seed=seed,
        whitened=True,
        retained_features=tuple(retained),
        label_variance=float(np.var(Yw)),
        feature_names=tuple(names[j] for j in retained),
        label_name=label_name,
    )
    return Dataset(Xw, Yw, meta)


def normalize(
    X_raw,
    Y_raw,
    feature_names: Optional[Sequence[str]] = None,
    label_name: str = LABEL_NAME,
    seed: Optional[int] = None,
) -> Dataset:
    """Standardize each column and the labels without decorrelating; constant columns are dropped."""
    X, Y = _inputs(X_raw, Y_raw)
    d = X.shape[1]
    names = tuple(feature_names) if feature_names is not None else default_feature_names(d)
    sd = X.std(axis=0)
    keep = [j for j in range(d) if sd[j] > 0.0]
    if not keep:
        raise DegenerateData("every column is constant")
    Xn = (X[:, keep] - X[:, keep].mean(axis=0)) / sd[keep]
    Yn = _standardize_labels(Y)
    meta = DatasetMeta(
        seed=seed,
        whitened=False,
        retained_features=tuple(keep),
        label_variance=float(np.var(Yn)),
        feature_names=tuple(names[j] for j in keep),
        label_name=label_name,
    )
    return Dataset(Xn, Yn, meta)
