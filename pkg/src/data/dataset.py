"""Immutable dataset container."""
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from src.utils.errors import DomainError

LABEL_NAME = "y"


@dataclass(frozen=True)
class DatasetMeta:
    """Provenance of a Dataset.

    Attributes:
        seed: master seed of the generator, None for ingested data
        whitened: X has zero mean and identity sample covariance
        retained_features: original column index of every column of X
            (-1 for columns added by augmentation)
        label_variance: sample variance of Y (1/n)
        feature_names: column names used by save_csv
        label_name: label column name used by save_csv
    """

    seed: Optional[int] = None
    whitened: bool = False
    retained_features: Tuple[int, ...] = ()
    label_variance: float = float("nan")
    feature_names: Tuple[str, ...] = ()
    label_name: str = LABEL_NAME


def default_feature_names(d: int) -> Tuple[str, ...]:
    return tuple(f"x{j}" for j in range(d))


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    Y: np.ndarray
    meta: DatasetMeta = field(default_factory=DatasetMeta)

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        Y = np.array(self.Y, dtype=float).ravel()
        if X.ndim != 2:
            raise DomainError(f"X must be 2-d, got shape {X.shape}")
        if Y.shape[0] != X.shape[0]:
            raise DomainError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]} labels")
        X.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        meta = self.meta
        if not meta.feature_names:
            meta = replace(meta, feature_names=default_feature_names(X.shape[1]))
        if not meta.retained_features:
            meta = replace(meta, retained_features=tuple(range(X.shape[1])))
        if len(meta.feature_names) != X.shape[1] or len(meta.retained_features) != X.shape[1]:
            raise DomainError(
                f"meta describes {len(meta.feature_names)} columns but X has {X.shape[1]}"
            )
        if Y.size and np.isnan(meta.label_variance):
            meta = replace(meta, label_variance=float(np.var(Y)))
        object.__setattr__(self, "meta", meta)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def with_labels(self, Y: np.ndarray, **meta_changes) -> "Dataset":
        Y = np.asarray(Y, dtype=float).ravel()
        meta = replace(self.meta, label_variance=float(np.var(Y)), **meta_changes)
        return Dataset(self.X, Y, meta)
