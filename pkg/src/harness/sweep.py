"""Dimension sweeps: replicate averaging with confidence intervals.

Each replicate draws from its own stream make_rng(seed, (grid index, rep
index)), and results are gathered in submission order, so the output does
not depend on the worker count.
"""
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.config.config import CI_Z
from src.data import (
    Dataset,
    augment,
    load_csv,
    misspecify_labels,
    normalize,
    subsample,
    surrogate_covariates,
    synth_gaussian,
    whiten,
)
from src.gp import (
    HyperParams,
    free_energy,
    free_energy_terms,
    optimal_ppnll,
    posterior_predictive,
    ppl2,
    ppnll,
)
from src.harness.config import ExperimentConfig
from src.kernels import KernelSpec, cross_gram, gram, kernel_from_lambda_policy
from src.utils.errors import GpddError, GridPointError, NoOptimalLambda
from src.utils.utils import worker_count

logger = logging.getLogger("gpdd.harness.sweep")


@dataclass(frozen=True)
class SweepRecord:
    metric: str
    kernel: str
    n: int
    d: int
    c: float
    gamma: float
    lam: float
    reps: int
    mean: float
    ci_half_width: float
    seed: int
    error: str = ""
    # lambda policy label; groups plot series, not written to the CSV
    policy: str = ""

    def as_row(self) -> dict:
        return {
            "metric": self.metric,
            "kernel": self.kernel,
            "n": self.n,
            "d": self.d,
            "c": self.c,
            "gamma": self.gamma,
            "lambda": self.lam,
            "reps": self.reps,
            "mean": self.mean,
            "ci_half_width": self.ci_half_width,
            "seed": self.seed,
            "error": self.error,
        }


@dataclass(frozen=True)
class GridPoint:
    index: int
    n: int
    d: int
    gamma: float
    lam: Optional[float]
    kernel: Optional[KernelSpec]
    error: str = ""


def ci_half_width(values: Sequence[float]) -> float:
    """CI_Z * sample SD / sqrt(reps)."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return float("nan")
    return CI_Z * float(np.std(values, ddof=1)) / math.sqrt(values.size)


def resolve_lambda(cfg: ExperimentConfig, n: int, d: int, gamma: float) -> Tuple[float, KernelSpec]:
    """(lambda, kernel in force) at one grid point.

    Raises:
        NoOptimalLambda: optimal policy where F_inf has no minimizer in lambda
    """
    policy = cfg.lambda_policy
    if policy.kind == "fixed":
        return policy.value, cfg.kernel
    if policy.kind == "tempered":
        return policy.mu / gamma, cfg.kernel
    pk = kernel_from_lambda_policy(cfg.kernel, policy.optimal_policy)
    lam = pk.optimal_lambda(gamma, d / n)
    return lam, pk.spec_at(lam)


def build_grid(cfg: ExperimentConfig) -> List[GridPoint]:
    points = []
    for i, (n, d, gamma) in enumerate(cfg.grid()):
        try:
            lam, spec = resolve_lambda(cfg, n, d, gamma)
        except NoOptimalLambda as e:
            logger.warning(f"No optimal lambda at n={n}, d={d}, gamma={gamma:g}: {e}")
            points.append(GridPoint(i, n, d, gamma, None, None, error=f"NoOptimalLambda: {e}"))
            continue
        points.append(GridPoint(i, n, d, gamma, lam, spec))
    return points


def prepare_base(cfg: ExperimentConfig) -> Optional[Dataset]:
    """The shared base set for csv and surrogate sources (None for synthetic)."""
    spec = cfg.data
    if spec.source == "synthetic":
        return None
    if spec.source == "csv":
        raw = load_csv(spec.path, spec.label)
    else:
        rows = spec.rows or 4 * (max(cfg.n_values) + cfg.test_points)
        noise = {} if spec.label_noise_sd is None else {"noise_sd": spec.label_noise_sd}
        raw = surrogate_covariates(rows, spec.base_d, seed=cfg.seed, stream=(0,), **noise)
    if spec.preprocess == "whiten":
        return whiten(raw.X, raw.Y, feature_names=raw.meta.feature_names, label_name=raw.meta.label_name)
    if spec.preprocess == "normalize":
        return normalize(raw.X, raw.Y, feature_names=raw.meta.feature_names, label_name=raw.meta.label_name)
    return raw


def replicate_data(
    cfg: ExperimentConfig, point: GridPoint, rep: int, base: Optional[Dataset]
) -> Tuple[Dataset, int]:
    """Training plus test rows for one replicate, and the number of training rows."""
    spec = cfg.data
    n, d = point.n, point.d
    total = n + (cfg.test_points if cfg.needs_test_points else 0)
    stream = (point.index, rep)

    if base is None:
        width = spec.augment.base_d if spec.augment else d
        ds = synth_gaussian(total, width, spec.covariance(width), spec.label_sd, cfg.seed, stream + (0,))
    else:
        ds = subsample(base, total, cfg.seed, stream + (0,))
        if spec.augment is None:
            if d > ds.d:
                raise GpddError(f"d={d} exceeds the {ds.d} available columns (no augmentation configured)")
            ds = Dataset(ds.X[:, :d], ds.Y)
        elif spec.augment.base_d is not None:
            ds = Dataset(ds.X[:, : spec.augment.base_d], ds.Y)

    if spec.augment is not None:
        ds = augment(ds, spec.augment.mode, d, cfg.seed, stream + (1,))
    if spec.misspecify is not None:
        ds = misspecify_labels(
            ds, spec.misspecify.theta, spec.misspecify.noise_sd, cfg.seed, stream + (2,), n_scale=n
        )
    return ds, n


def metric_value(metric: str, spec: KernelSpec, hp: HyperParams, ds: Dataset, n: int) -> float:
    """Per-datum free energy, or per-test-point predictive losses."""
    X, Y = ds.X[:n], ds.Y[:n]
    K = gram(spec, X)
    if metric == "free-energy":
        return free_energy(K, Y, hp) / n
    Xt, Yt = ds.X[n:], ds.Y[n:]
    m = Xt.shape[0]
    pp = posterior_predictive(K, cross_gram(spec, X, Xt), gram(spec, Xt), Y, hp)
    if metric == "ppl2":
        return ppl2(pp, Yt, hp) / m
    if metric == "ppnll":
        return ppnll(pp, Yt, hp) / m
    r = pp.mean - Yt
    mse = float(r @ r) / m
    _, value = optimal_ppnll(mse, float(np.trace(pp.raw_sigma)) / m, 1, hp.ridge)
    return value


def _hyper(cfg: ExperimentConfig, point: GridPoint) -> HyperParams:
    if cfg.lambda_policy.kind == "tempered":
        return HyperParams.tempered(cfg.lambda_policy.mu, point.gamma)
    policy = "optimal-lambda" if cfg.lambda_policy.kind == "optimal" else "fixed"
    return HyperParams(lam=point.lam, gamma=point.gamma, policy=policy)


# worker-process state, set once per process by _init_worker
_BASE: Optional[Dataset] = None


def _init_worker(base: Optional[Dataset]) -> None:
    global _BASE
    _BASE = base


def _run_replicate(task) -> Tuple[float, str]:
    cfg, point, rep = task
    try:
        ds, n = replicate_data(cfg, point, rep, _BASE)
        return metric_value(cfg.metric, point.kernel, _hyper(cfg, point), ds, n), ""
    except GpddError as e:
        return float("nan"), f"{type(e).__name__}: {e}"


def _run_terms(task) -> Tuple[float, float, float]:
    cfg, point, rep = task
    ds, n = replicate_data(cfg, point, rep, _BASE)
    terms = free_energy_terms(gram(point.kernel, ds.X[:n]), ds.Y[:n], _hyper(cfg, point))
    return terms.quad / n, terms.trace / n, terms.logdet / n


def parallel_map(fn: Callable, tasks: Iterable, base: Optional[Dataset], workers: Optional[int] = None) -> list:
    """fn over tasks in submission order, in-process for a single worker."""
    tasks = list(tasks)
    workers = min(worker_count(workers), max(1, len(tasks)))
    if workers == 1:
        _init_worker(base)
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(base,)) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def run_sweep(cfg: ExperimentConfig, workers: Optional[int] = None, base: Optional[Dataset] = None) -> List[SweepRecord]:
    """One record per grid point, each averaging cfg.reps replicates.

    Grid points without an optimal lambda become error records; any other
    module error is raised as GridPointError with the point's coordinates.
    """
    start = time.time()
    points = build_grid(cfg)
    if base is None:
        base = prepare_base(cfg)
    logger.info(f"Sweep {cfg.name!r}: {len(points)} grid point(s) x {cfg.reps} reps, metric {cfg.metric}")

    live = [p for p in points if not p.error]
    tasks = [(cfg, p, r) for p in live for r in range(cfg.reps)]
    results = parallel_map(_run_replicate, tasks, base, workers)

    by_point = {}
    for (_, p, _), (value, err) in zip(tasks, results):
        by_point.setdefault(p.index, []).append((value, err))

    records = []
    for p in points:
        c = p.d / p.n
        if p.error:
            records.append(SweepRecord(
                cfg.metric, cfg.kernel.id, p.n, p.d, c, p.gamma, float("nan"),
                cfg.reps, float("nan"), float("nan"), cfg.seed, p.error, cfg.lambda_policy.label,
            ))
            continue
        errors = [err for _, err in by_point[p.index] if err]
        if errors:
            raise GridPointError(GpddError(errors[0]), p.n, p.d, p.gamma, p.lam)
        values = [v for v, _ in by_point[p.index]]
        records.append(SweepRecord(
            cfg.metric, cfg.kernel.id, p.n, p.d, c, p.gamma, float(p.lam),
            cfg.reps, float(np.mean(values)), ci_half_width(values), cfg.seed, policy=cfg.lambda_policy.label,
        ))
        logger.debug(f"n={p.n} d={p.d} gamma={p.gamma:g}: mean={records[-1].mean:.6g}")

    logger.info(f"Sweep {cfg.name!r} finished in {time.time() - start:.1f}s")
    return records


def run_terms(cfg: ExperimentConfig, workers: Optional[int] = None, base: Optional[Dataset] = None):
    """Per grid point, replicate arrays of (Y^T Q Y/n, tr Q/n, log det/n) for the free energy."""
    points = [p for p in build_grid(cfg) if not p.error]
    if base is None:
        base = prepare_base(cfg)
    tasks = [(cfg, p, r) for p in points for r in range(cfg.reps)]
    results = np.asarray(parallel_map(_run_terms, tasks, base, workers), dtype=float)
    return points, results.reshape(len(points), cfg.reps, 3)


def with_label_sd(cfg: ExperimentConfig, label_sd: float) -> ExperimentConfig:
    return replace(cfg, data=replace(cfg.data, label_sd=label_sd))
