"""CSV ingestion and emission of datasets."""
import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from src.config.config import CSV_FLOAT_FORMAT
from src.data.dataset import Dataset, DatasetMeta
from src.utils.errors import DataFormatError

logger = logging.getLogger("gpdd.data")

PathLike = Union[str, Path]


def _to_float(cell: str) -> float:
    # float() is correctly rounded, so 17-digit text reloads bit-exactly
    try:
        value = float(cell)
    except ValueError:
        return np.nan
    return value if np.isfinite(value) else np.nan


def _first_bad_cell(raw: pd.DataFrame, numeric: pd.DataFrame):
    bad = numeric.isna()
    for col in raw.columns:
        rows = np.flatnonzero(bad[col].to_numpy())
        if rows.size:
            return int(rows[0]), col
    return None


def load_csv(path: PathLike, label_column: str) -> Dataset:
    """Read a header-row CSV of numbers; label_column becomes Y, every other column X.

    Raises:
        DataFormatError: unparseable file, missing label column, empty or non-numeric cells
    """
    path = Path(path)
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise DataFormatError(f"{path}: file is empty") from e
    except pd.errors.ParserError as e:
        raise DataFormatError(f"{path}: {e}") from e

    columns = [str(c) for c in raw.columns]
    if label_column not in columns:
        raise DataFormatError(
            f"{path}: label column {label_column!r} not found; available columns: {', '.join(columns)}"
        )
    if len(columns) < 2:
        raise DataFormatError(f"{path}: no feature columns besides {label_column!r}")
    if raw.empty:
        raise DataFormatError(f"{path}: no data rows")

    numeric = raw.apply(lambda s: s.map(_to_float))
    bad = _first_bad_cell(raw, numeric)
    if bad is not None:
        row, col = bad
        # header is line 1
        raise DataFormatError(
            f"{path}: non-numeric cell {raw.at[row, col]!r} at line {row + 2}, column {col!r}"
        )

    features = [c for c in columns if c != label_column]
    X = numeric[features].to_numpy(dtype=float)
    Y = numeric[label_column].to_numpy(dtype=float)
    logger.info(f"Loaded {path}: n={X.shape[0]}, d={X.shape[1]}")
    return Dataset(X, Y, DatasetMeta(feature_names=tuple(features), label_name=label_column))


def save_csv(ds: Dataset, path: PathLike) -> None:
    """Write features then the label column, 17 significant digits so reloading is exact."""
    path = Path(path)
    frame = pd.DataFrame(ds.X, columns=list(ds.meta.feature_names))
    frame[ds.meta.label_name] = ds.Y
    try:
        frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {path}: n={ds.n}, d={ds.d}")
