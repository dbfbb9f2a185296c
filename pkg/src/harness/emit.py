"""CSV and SVG output of sweep records."""
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from src.config.config import CSV_FLOAT_FORMAT, CSV_HEADER, SVG_HASH_SALT  # noqa: E402
from src.harness.sweep import SweepRecord  # noqa: E402
from src.utils.errors import DomainError  # noqa: E402

logger = logging.getLogger("gpdd.harness.emit")

PathLike = Union[str, Path]


def records_frame(records: Sequence[SweepRecord]) -> pd.DataFrame:
    return pd.DataFrame([r.as_row() for r in records], columns=CSV_HEADER)


def write_csv(records: Sequence[SweepRecord], path: PathLike) -> None:
    if not records:
        raise DomainError("no records to write")
    path = Path(path)
    try:
        records_frame(records).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="")
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {len(records)} record(s) to {path}")


def write_table(rows: List[Dict], columns: Sequence[str], path: PathLike) -> None:
    """Any list of dict rows, same number formatting as the sweep CSV."""
    path = Path(path)
    try:
        pd.DataFrame(rows, columns=list(columns)).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="")
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e


def _series(records: Sequence[SweepRecord]) -> Dict[Tuple, List[SweepRecord]]:
    groups: Dict[Tuple, List[SweepRecord]] = {}
    for r in records:
        groups.setdefault((r.metric, r.policy, r.n, r.gamma), []).append(r)
    return groups


def write_svg(records: Sequence[SweepRecord], path: PathLike, x: str = "d", title: Optional[str] = None) -> int:
    """Line chart of mean vs x with CI whiskers, one series per (metric, lambda policy, n, gamma).

    Series k is drawn with gid "series-k". Returns the number of series.
    """
    if not records:
        raise DomainError("no records to plot")
    if x not in ("d", "c"):
        raise DomainError(f"x axis must be 'd' or 'c', got {x!r}")
    path = Path(path)
    groups = _series(records)
    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for k, ((metric, policy, n, gamma), rows) in enumerate(groups.items()):
            xs = [getattr(r, x) for r in rows]
            ys = [r.mean for r in rows]
            err = [r.ci_half_width for r in rows]
            label = f"n={n}, gamma={gamma:g}" + (f", {policy}" if policy else "")
            (line,) = ax.plot(xs, ys, marker="o", markersize=3, label=label)
            line.set_gid(f"series-{k}")
            ax.errorbar(xs, ys, yerr=err, fmt="none", ecolor=line.get_color(), capsize=2)
        ax.set_xlabel(x)
        ax.set_ylabel(records[0].metric)
        if title:
            ax.set_title(title)
        ax.legend(loc="best", fontsize="small")
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as e:
            raise OSError(f"cannot write {path}: {e}") from e
        finally:
            plt.close(fig)
    logger.info(f"Wrote {len(groups)} series to {path}")
    return len(groups)


def emit(records: Sequence[SweepRecord], csv_path: PathLike, svg_path: Optional[PathLike] = None, x: str = "d") -> None:
    write_csv(records, csv_path)
    if svg_path is not None:
        plotted = [r for r in records if not r.error]
        if not plotted:
            logger.warning(f"Every record carries an error; {svg_path} not written")
            return
        write_svg(plotted, svg_path, x=x)
