"""Self-checks of every exact identity and oracle the library relies on.

Each check returns an observed discrepancy and compares it to a tolerance.
Named functions can be replaced through `overrides`, which is how the test
suite confirms a broken formula is caught by the check that covers it.
"""
import logging
import math
import types
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy import optimize, special, stats

from src import data as data_mod
from src import gp as gp_mod
from src import kernels as kernels_mod
from src import rmt as rmt_mod
from src import specfun as specfun_mod
from src.utils.errors import DomainError, NoOptimalLambda
from src.utils.optimize import minimize_scalar
from src.utils.utils import make_rng

logger = logging.getLogger("gpdd.harness.validate")

SUITES = ("specfun", "rmt", "kernels", "gp", "data")

C_GRID = (0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0)
_SEED = 7


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    observed: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.suite}.{self.name}  observed={self.observed:.3e}  tol={self.tolerance:.1e}"
        return f"{text}  {self.detail}" if self.detail else text


@dataclass(frozen=True)
class ValidationReport:
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def lines(self) -> List[str]:
        out = [r.line() for r in self.results]
        out.append(f"{len(self.results) - len(self.failed)}/{len(self.results)} checks passed")
        return out


class Impl:
    """Function lookup with optional replacements."""

    _MODULES = (specfun_mod, rmt_mod, kernels_mod, gp_mod, data_mod)

    def __init__(self, overrides: Optional[Dict[str, Callable]] = None):
        self._overrides = dict(overrides or {})

    def __getattr__(self, name: str):
        if name.startswith("_"):
            raise AttributeError(name)
        if name in self._overrides:
            return self._overrides[name]
        for module in self._MODULES:
            attr = getattr(module, name, None)
            # submodules such as src.rmt.free_energy shadow functions of the same name
            if attr is not None and not isinstance(attr, types.ModuleType):
                return attr
        raise AttributeError(f"no function named {name!r}")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    tolerance: float
    fn: Callable[[Impl], tuple]
    quick: bool = True


REGISTRY: List[Check] = []


def check(suite: str, name: str, tolerance: float, quick: bool = True):
    def register(fn):
        REGISTRY.append(Check(suite, name, tolerance, fn, quick))
        return fn
    return register


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(b))


def _spd(rng, n: int) -> np.ndarray:
    A = rng.standard_normal((n, n))
    return A @ A.T / n + 0.1 * np.eye(n)


# specfun

@check("specfun", "digamma_vs_scipy", 1e-12)
def _digamma_vs_scipy(impl):
    z = np.concatenate([np.linspace(0.05, 3.0, 60), np.linspace(3.0, 500.0, 60)])
    return float(np.max(np.abs(impl.digamma(z) - special.digamma(z)))), ""


@check("specfun", "digamma_at_one", 1e-14)
def _digamma_at_one(impl):
    return abs(impl.digamma(1.0) + specfun_mod.EULER_GAMMA), ""


@check("specfun", "sum_digamma_identity", 1e-10)
def _sum_digamma_identity(impl):
    worst = 0.0
    for n in (1, 2, 5, 17, 100):
        for z in (0.3, 1.0, 2.5, 10.0):
            worst = max(worst, _rel(impl.sum_digamma(n, z), impl.sum_digamma_direct(n, z)))
    return worst, "n in {1..100}, z in {0.3..10}"


@check("specfun", "sum_digamma_half_identity", 1e-10)
def _sum_digamma_half_identity(impl):
    worst = 0.0
    for d in (1, 2, 5, 20):
        for n in (d + 2, d + 3, 2 * d + 5, 10 * d + 7):
            worst = max(worst, _rel(impl.sum_digamma_half_closed(n, d), impl.sum_digamma_half_direct(n, d)))
    return worst, "n >= d + 2"


# rmt

@check("rmt", "mp_stieltjes_quadratic", 1e-10)
def _mp_quadratic(impl):
    worst = 0.0
    for c in C_GRID:
        for z in (-0.01, -0.5, -1.0, -10.0):
            m = impl.mp_stieltjes(z, c)
            worst = max(worst, abs(c * z * m * m - (1.0 - c - z) * m + 1.0))
    return worst, ""


@check("rmt", "trace_fixed_point", 1e-10)
def _trace_fixed_point(impl):
    worst = max(
        abs(impl.trace_limit_fixed_point_residual(mu, c))
        for c in C_GRID for mu in (1e-3, 0.1, 1.0, 10.0, 1e3)
    )
    return worst, ""


@check("rmt", "logdet_closed_vs_quadrature", 1e-6)
def _logdet_quadrature(impl):
    worst = max(
        abs(impl.logdet_limit(mu, c) - impl.logdet_limit_quadrature(mu, c))
        for c in C_GRID for mu in (0.01, 0.5, 1.0, 5.0)
    )
    return worst, ""


@check("rmt", "free_energy_reference_value", 1e-5)
def _free_energy_reference(impl):
    ctx = impl.RmtContext(alpha=1.0, c=0.5, beta=0.0)
    return abs(impl.limiting_free_energy(1.0, 1.0, ctx) - 1.519676), "linear, c=0.5, lambda=gamma=1"


def _plugin_contexts(impl):
    linear = (1.0, 0.0)
    gaussian = impl.coefficients(kernels_mod.KernelSpec("gaussian"), 1.0)
    return {"linear": linear, "gaussian-plug-in": gaussian}


def _brent_argmin(f, lo: float, hi: float) -> float:
    res = optimize.minimize_scalar(
        lambda u: f(math.exp(u)), bounds=(math.log(lo), math.log(hi)), method="bounded",
        options={"xatol": 1e-10, "maxiter": 2000},
    )
    return math.exp(res.x)


@check("rmt", "optimal_lambda_vs_minimizer", 1e-6)
def _optimal_lambda_vs_minimizer(impl):
    """Closed form against golden section (lambda-scaled), plug-in against Brent on the fixed-beta F_inf."""
    worst, where = 0.0, ""
    for c in C_GRID:
        for gamma in (0.1, 0.3):
            for label, beta0 in (("linear", 0.0), ("scaled beta0=0.3", 0.3)):
                ctx = impl.RmtContext(alpha=1.0, c=c, beta0=beta0)
                closed = impl.optimal_lambda(gamma, ctx)
                numeric, _ = minimize_scalar(
                    lambda lam: impl.limiting_free_energy(lam, gamma, ctx), 1e-4, 1e4, log_scale=True
                )
                err = _rel(closed, numeric) if closed > 1.0 else abs(closed - numeric) / closed
                if err > worst:
                    worst, where = err, f"{label} c={c:g} gamma={gamma:g}"
            alpha, beta = _plugin_contexts(impl)["gaussian-plug-in"]
            ctx = impl.RmtContext(alpha=alpha, c=c, beta=beta)
            plug_in = impl.optimal_lambda_fixed_beta(gamma, ctx)
            numeric = _brent_argmin(lambda lam: impl.limiting_free_energy(lam, gamma, ctx), 1e-4, 1e4)
            err = abs(plug_in - numeric) / numeric
            if err > worst:
                worst, where = err, f"gaussian-plug-in c={c:g} gamma={gamma:g}"
    return worst, f"worst at {where}" if where else ""


@check("rmt", "optimal_gamma_vs_minimizer", 1e-6)
def _optimal_gamma_vs_minimizer(impl):
    worst, where = 0.0, ""
    for label, (alpha, beta) in _plugin_contexts(impl).items():
        for c in C_GRID:
            for mu in (0.1, 1.0):
                ctx = impl.RmtContext(alpha=alpha, c=c, beta=beta)
                closed = impl.optimal_gamma(mu, ctx)
                numeric, _ = minimize_scalar(
                    lambda g: impl.limiting_free_energy(mu / g, g, ctx), 1e-6, 1e6, log_scale=True
                )
                err = abs(closed - numeric) / closed
                if err > worst:
                    worst, where = err, f"{label} c={c:g} mu={mu:g}"
    return worst, f"worst at {where}" if where else ""


@check("rmt", "optimal_gamma_form_adjudication", 1e-6)
def _gamma_adjudication(impl):
    """The implemented form must match the minimizer; reports whether the alternative form does."""
    implemented, alternative = 0.0, 0.0
    for c in C_GRID:
        ctx = impl.RmtContext(alpha=1.0, c=c, beta=0.0)
        numeric, _ = minimize_scalar(lambda g: impl.limiting_free_energy(1.0 / g, g, ctx), 1e-6, 1e6, log_scale=True)
        implemented = max(implemented, abs(impl.optimal_gamma(1.0, ctx) - numeric) / numeric)
        alternative = max(alternative, abs(impl.optimal_gamma_alternative(1.0, ctx) - numeric) / numeric)
    verdict = "alternative form also matches" if alternative <= 1e-6 else "alternative form does not match"
    return implemented, f"{verdict} (max rel err {alternative:.2e})"


@check("rmt", "no_optimal_lambda_boundary", 0.0)
def _no_optimal_boundary(impl):
    misses = 0
    for beta0 in (0.0, 0.25, 0.6):
        ctx = impl.RmtContext(alpha=1.0, c=1.0, beta0=beta0)
        for gamma in (0.1, 0.39, 0.4, 0.75, 1.0, 2.0):
            raised = False
            try:
                impl.optimal_lambda(gamma, ctx)
            except NoOptimalLambda:
                raised = True
            misses += raised != (gamma + beta0 >= 1.0)
    return float(misses), "raised exactly when gamma >= 1 - beta0"


@check("rmt", "critical_point_residual", 1e-9)
def _critical_point(impl):
    worst = 0.0
    for c in C_GRID:
        for g0 in (0.05, 0.3, 0.8):
            mu = impl.optimal_mu(g0, c)
            worst = max(worst, abs(impl.critical_point_residual(mu, g0, c)) / max(1.0, mu * mu))
    return worst, ""


@check("rmt", "free_energy_decreasing_in_c", 0.0)
def _monotone_in_c(impl):
    c_values = np.linspace(0.05, 5.0, 200)
    bad = 0
    for beta0 in (0.0, 0.2):
        for gamma in (0.01, 0.1, 0.5):
            curve = impl.limiting_free_energy_curve(c_values, gamma, alpha=1.0, beta=beta0)
            bad += int(np.sum(~(np.diff(curve) < 0.0)))
    return float(bad), "non-decreasing steps of F_inf(lambda*(c))"


# kernels

@check("kernels", "gram_symmetry", 0.0)
def _gram_symmetry(impl):
    X = make_rng(_SEED, (1,)).standard_normal((25, 8))
    worst = 0.0
    for family in kernels_mod.KERNEL_KINDS:
        K = impl.gram(kernels_mod.KernelSpec(family), X)
        worst = max(worst, float(np.max(np.abs(K - K.T))))
    return worst, ""


@check("kernels", "gaussian_coefficients", 1e-12)
def _gaussian_coefficients(impl):
    alpha, beta = impl.coefficients(kernels_mod.KernelSpec("gaussian"), 1.0)
    e2 = math.exp(-2.0)
    return max(abs(alpha - 2 * e2), abs(beta - (1 - 3 * e2))), ""


@check("kernels", "matern_large_nu_limit", 0.02)
def _matern_limit(impl):
    X = make_rng(_SEED, (2,)).standard_normal((10, 3))
    K_m = impl.gram(kernels_mod.KernelSpec("matern", {"nu": 100.0, "length_scale": 1 / math.sqrt(2)}), X)
    K_g = impl.gram(kernels_mod.KernelSpec("gaussian"), X)
    return float(np.max(np.abs(K_m - K_g))), "nu=100 vs gaussian"


@check("kernels", "polynomial_lambda_scaled", 1e-9)
def _polynomial_scaled(impl):
    _, alpha, beta0 = impl.rescale_bandwidth(kernels_mod.KernelSpec("polynomial", {"offset": 1.0, "degree": 2}), 0.7)
    return max(abs(alpha - 2.0), abs(beta0 - 1.0)), "alpha=2, beta0=1"


# gp

@check("gp", "free_energy_vs_gaussian_density", 1e-10)
def _free_energy_oracle(impl):
    rng = make_rng(_SEED, (3,))
    worst = 0.0
    for n in (1, 3, 10, 20):
        K = _spd(rng, n)
        Y = rng.standard_normal(n)
        hp = gp_mod.HyperParams(lam=0.7, gamma=0.3)
        oracle = -stats.multivariate_normal(mean=np.zeros(n), cov=K / hp.lam + hp.gamma * np.eye(n)).logpdf(Y)
        worst = max(worst, _rel(impl.free_energy(K, Y, hp), float(oracle)))
    return worst, ""


@check("gp", "weight_space_equivalence", 1e-8)
def _weight_space(impl):
    rng = make_rng(_SEED, (4,))
    worst = 0.0
    for n, d in ((3, 2), (8, 10), (10, 4)):
        X = rng.standard_normal((n, d))
        Y = rng.standard_normal(n)
        hp = gp_mod.HyperParams(lam=1.3, gamma=0.2)
        K = impl.gram(kernels_mod.KernelSpec("linear"), X)
        worst = max(worst, _rel(impl.free_energy(K, Y, hp), impl.weight_space_free_energy(X, Y, hp)))
    return worst, ""


@check("gp", "cv_scores_sum_to_free_energy", 1e-8)
def _cv_identity(impl):
    rng = make_rng(_SEED, (5,))
    spec = kernels_mod.KernelSpec("gaussian")
    hp = gp_mod.HyperParams(lam=0.8, gamma=0.5)
    worst = 0.0
    for n in (2, 3, 4, 5):
        X = rng.standard_normal((n, 3))
        Y = rng.standard_normal(n)
        total = sum(impl.cv_score(X, Y, k, spec, hp) for k in range(1, n + 1))
        worst = max(worst, abs(total - impl.free_energy(impl.gram(spec, X), Y, hp)))
    return worst, "n in 2..5"


@check("gp", "ppnll_ppl2_identity", 1e-12)
def _ppnll_identity(impl):
    rng = make_rng(_SEED, (6,))
    X, Xt = rng.standard_normal((12, 4)), rng.standard_normal((5, 4))
    Y, yt = rng.standard_normal(12), rng.standard_normal(5)
    spec = kernels_mod.KernelSpec("linear")
    hp = gp_mod.HyperParams(lam=2.0, gamma=0.25)
    pp = impl.posterior_predictive(impl.gram(spec, X), impl.cross_gram(spec, X, Xt), impl.gram(spec, Xt), Y, hp)
    lhs = impl.ppnll(pp, yt, hp)
    rhs = impl.ppl2(pp, yt, hp) / (2 * hp.gamma) + 0.5 * pp.m * math.log(2 * math.pi * hp.gamma)
    return abs(lhs - rhs), ""


@check("gp", "posterior_psd_and_trace_bound", 1e-10)
def _posterior_bounds(impl):
    rng = make_rng(_SEED, (7,))
    spec = kernels_mod.KernelSpec("gaussian")
    X, Xt = rng.standard_normal((15, 3)), rng.standard_normal((6, 3))
    hp = gp_mod.HyperParams(lam=1.0, gamma=0.05)
    pp = impl.posterior_predictive(
        impl.gram(spec, X), impl.cross_gram(spec, X, Xt), impl.gram(spec, Xt), rng.standard_normal(15), hp
    )
    neg = max(0.0, -float(np.min(np.linalg.eigvalsh(pp.cov))))
    excess = max(0.0, float(np.trace(pp.raw_sigma) - np.sum(impl.diag(spec, Xt))))
    return max(neg, excess), ""


# data

@check("data", "whiten_postconditions", 1e-8)
def _whiten_post(impl):
    rng = make_rng(_SEED, (8,))
    X = rng.standard_normal((500, 50)) @ rng.standard_normal((50, 50)) + 3.0
    ds = impl.whiten(X, rng.standard_normal(500))
    cov = ds.X.T @ ds.X / ds.n
    return max(float(np.max(np.abs(ds.X.mean(axis=0)))), float(np.max(np.abs(cov - np.eye(ds.d))))), ""


@check("data", "whiten_idempotent", 1e-8)
def _whiten_idempotent(impl):
    rng = make_rng(_SEED, (9,))
    once = impl.whiten(rng.standard_normal((200, 20)) * 4.0, rng.standard_normal(200))
    twice = impl.whiten(once.X, once.Y)
    return float(np.max(np.abs(twice.X - once.X))), ""


@check("data", "whiten_drops_duplicate", 0.0)
def _whiten_duplicate(impl):
    rng = make_rng(_SEED, (10,))
    X = rng.standard_normal((100, 5))
    X = np.hstack([X, X[:, [2]]])
    ds = impl.whiten(X, rng.standard_normal(100))
    kept = set(ds.meta.retained_features)
    return float(ds.d != 5 or len(kept & {2, 5}) != 1), "duplicate column removed once"


@check("data", "augment_copied_columns", 0.0)
def _augment_copied(impl):
    ds = data_mod.synth_gaussian(20, 30, seed=_SEED)
    out = impl.augment(ds, "copied", 65, seed=_SEED)
    return float(np.max(np.abs(out.X[:, 30] - out.X[:, 0])) + np.max(np.abs(out.X[:, 64] - out.X[:, 4]))), ""


# Monte Carlo convergence; slow

@check("kernels", "gram_limits_monte_carlo", 0.05, quick=False)
def _gram_limits_mc(impl):
    worst = 0.0
    for family in ("linear", "gaussian"):
        spec = kernels_mod.KernelSpec(family)
        alpha, beta = impl.coefficients(spec, 1.0)
        for c in (0.5, 2.0):
            n = 1000
            d = int(c * n)
            ctx = impl.RmtContext(alpha=alpha, c=c, beta=beta).with_ridge(0.5)
            X = make_rng(_SEED, (11, int(10 * c))).standard_normal((n, d))
            A = impl.gram(spec, X) + 0.5 * np.eye(n)
            _, logdet = np.linalg.slogdet(A)
            trace = float(np.trace(np.linalg.inv(A))) / n
            worst = max(worst, _rel(trace, impl.gram_trace_limit(ctx)), _rel(logdet / n, impl.gram_logdet_limit(ctx)))
    return worst, "n=1000, ridge 0.5"


def run_validation(
    suite: str = "all", quick: bool = False, overrides: Optional[Dict[str, Callable]] = None
) -> ValidationReport:
    """Run registered checks; a check that raises is reported as failed."""
    if suite != "all" and suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; expected 'all' or one of {SUITES}")
    impl = Impl(overrides)
    results = []
    for chk in REGISTRY:
        if suite != "all" and chk.suite != suite:
            continue
        if quick and not chk.quick:
            continue
        try:
            observed, detail = chk.fn(impl)
            passed = bool(observed <= chk.tolerance)
        except Exception as e:
            observed, detail, passed = float("nan"), f"raised {type(e).__name__}: {e}", False
        results.append(CheckResult(chk.suite, chk.name, float(observed), chk.tolerance, passed, detail))
        log = logger.info if passed else logger.warning
        log(results[-1].line())
    return ValidationReport(results)
