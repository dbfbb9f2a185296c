"""Comparisons of Monte Carlo sweeps with the random-matrix limits."""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

from src.data import Dataset
from src.harness.config import ExperimentConfig
from src.harness.sweep import run_sweep, run_terms, with_label_sd
from src.kernels import KernelSpec, coefficients, kernel_from_lambda_policy
from src.rmt import RmtContext, gram_logdet_limit, gram_trace_limit
from src.utils.errors import ConfigError, NoOptimalLambda

logger = logging.getLogger("gpdd.harness.limits")


@dataclass(frozen=True)
class LimitComparison:
    n: int
    d: int
    c: float
    gamma: float
    lam: float
    empirical: float
    ci_half_width: float
    limit: float

    @property
    def abs_dev(self) -> float:
        return abs(self.empirical - self.limit)


def free_energy_limit(spec: KernelSpec, lam: float, gamma: float, c: float, label_variance: float = 1.0) -> float:
    """F_inf for the kernel actually in use, with beta held at its value for this spec."""
    alpha, beta = coefficients(spec, 1.0)
    ctx = RmtContext(alpha=alpha, c=c, beta=beta).with_ridge(lam * gamma)
    return (
        0.5 * lam * label_variance * gram_trace_limit(ctx)
        + 0.5 * gram_logdet_limit(ctx)
        - 0.5 * math.log(lam / (2.0 * math.pi))
    )


def _check_limit_config(cfg: ExperimentConfig) -> None:
    if cfg.metric != "free-energy":
        raise ConfigError(f"limit comparison needs metric free-energy, got {cfg.metric}")
    data = cfg.data
    if data.source != "synthetic" or data.cov != "identity" or data.augment or data.misspecify:
        raise ConfigError("limit comparison needs synthetic identity-covariance data without augmentation")


def empirical_vs_limit(
    cfg: ExperimentConfig, workers: Optional[int] = None
) -> List[LimitComparison]:
    """Pair every sweep point with F_inf at the same (lambda, gamma, c)."""
    _check_limit_config(cfg)
    records = run_sweep(cfg, workers=workers)
    sigma2 = cfg.data.label_sd ** 2
    out = []
    for rec in records:
        if rec.error:
            continue
        spec = _spec_in_force(cfg, rec.lam)
        limit = free_energy_limit(spec, rec.lam, rec.gamma, rec.c, sigma2)
        out.append(LimitComparison(rec.n, rec.d, rec.c, rec.gamma, rec.lam, rec.mean, rec.ci_half_width, limit))
    if out:
        worst = max(out, key=lambda r: r.abs_dev)
        logger.info(f"Max |empirical - limit| = {worst.abs_dev:.4g} at n={worst.n}, c={worst.c:g}")
    return out


def _spec_in_force(cfg: ExperimentConfig, lam: float) -> KernelSpec:
    policy = cfg.lambda_policy
    if policy.kind == "optimal":
        return kernel_from_lambda_policy(cfg.kernel, policy.optimal_policy).spec_at(lam)
    return cfg.kernel


def max_deviation(rows: Sequence[LimitComparison]) -> float:
    return max((r.abs_dev for r in rows), default=float("nan"))


@dataclass(frozen=True)
class LabelVarianceRow:
    sigma2: float
    n: int
    d: int
    gamma: float
    lam: float
    empirical: float
    ci_half_width: float
    recombined: float

    @property
    def within_ci(self) -> bool:
        return abs(self.empirical - self.recombined) <= 2.0 * self.ci_half_width


def label_variance_check(
    cfg: ExperimentConfig,
    variances: Sequence[float] = (0.1, 10.0),
    workers: Optional[int] = None,
    base: Optional[Dataset] = None,
) -> List[LabelVarianceRow]:
    """Rebuild the mean free energy at label variance s2 from the unit-variance run.

    Only the label variance enters the data-fit term, so
    F/n ~ lam s2/2 E tr(Q)/n + 1/2 E log det/n - 1/2 log(lam/2pi).
    """
    if cfg.metric != "free-energy":
        raise ConfigError(f"label-variance check needs metric free-energy, got {cfg.metric}")
    points, terms = run_terms(with_label_sd(cfg, 1.0), workers=workers, base=base)
    rows = []
    for s2 in variances:
        records = [r for r in run_sweep(with_label_sd(cfg, math.sqrt(s2)), workers=workers, base=base) if not r.error]
        for p, rec, t in zip(points, records, terms):
            trace, logdet = t[:, 1].mean(), t[:, 2].mean()
            recombined = 0.5 * p.lam * s2 * trace + 0.5 * logdet - 0.5 * math.log(p.lam / (2.0 * math.pi))
            rows.append(LabelVarianceRow(
                s2, p.n, p.d, p.gamma, p.lam, rec.mean,
                rec.ci_half_width, float(recombined),
            ))
    return rows


@dataclass(frozen=True)
class LimitCurvePoint:
    c: float
    gamma: float
    lam: float
    alpha: float
    beta: float
    free_energy: float
    error: str = ""


def limit_curve(
    spec: KernelSpec,
    c_values: Sequence[float],
    gamma: float,
    lam: Optional[float] = None,
    policy: str = "plug-in",
) -> List[LimitCurvePoint]:
    """F_inf along c at fixed gamma, with lambda fixed or set to lambda*(c)."""
    out = []
    for c in c_values:
        c = float(c)
        try:
            if lam is None:
                pk = kernel_from_lambda_policy(spec, policy)
                lam_c = pk.optimal_lambda(gamma, c)
                in_force = pk.spec_at(lam_c)
            else:
                lam_c, in_force = lam, spec
        except NoOptimalLambda as e:
            out.append(LimitCurvePoint(c, gamma, float("nan"), float("nan"), float("nan"), float("nan"),
                                       f"NoOptimalLambda: {e}"))
            continue
        alpha, beta = coefficients(in_force, 1.0)
        out.append(LimitCurvePoint(c, gamma, lam_c, alpha, beta, free_energy_limit(in_force, lam_c, gamma, c)))
    return out
