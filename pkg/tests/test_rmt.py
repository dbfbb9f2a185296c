"""Tests for the Marchenko-Pastur limits, the limiting free energy and its optima."""
import math

import numpy as np
import pytest

from src.rmt import (
    RmtContext,
    critical_point_residual,
    gram_logdet_limit,
    gram_trace_limit,
    limiting_free_energy,
    limiting_free_energy_curve,
    logdet_limit,
    logdet_limit_quadrature,
    mp_stieltjes,
    optimal_gamma,
    optimal_gamma_alternative,
    optimal_lambda,
    optimal_lambda_fixed_beta,
    optimal_mu,
    policy_lambda,
    trace_limit,
    trace_limit_fixed_point_residual,
)
from src.utils.errors import DomainError, NoOptimalLambda
from src.utils.optimize import minimize_scalar

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
C_VALUES = [0.1, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0]


def test_mp_stieltjes_golden_ratio():
    assert mp_stieltjes(-1.0, 1.0) == pytest.approx(GOLDEN, abs=1e-10)


@pytest.mark.parametrize("c", C_VALUES)
def test_mp_stieltjes_solves_quadratic(c):
    for z in (-0.01, -1.0, -50.0):
        m = mp_stieltjes(z, c)
        assert m > 0
        assert abs(c * z * m * m - (1 - c - z) * m + 1) < 1e-10


@pytest.mark.parametrize("z", [0.0, 1.0, float("nan")])
def test_mp_stieltjes_domain(z):
    with pytest.raises(DomainError):
        mp_stieltjes(z, 1.0)


def test_trace_limit_golden_ratio():
    assert trace_limit(1.0, 1.0) == pytest.approx(GOLDEN, abs=1e-10)


def test_trace_limit_large_mu():
    assert 1e6 * trace_limit(1e6, 0.7) == pytest.approx(0.7, abs=1e-4)


@pytest.mark.parametrize("c", C_VALUES)
@pytest.mark.parametrize("mu", [1e-4, 0.3, 1.0, 30.0, 1e5])
def test_trace_limit_fixed_point(c, mu):
    assert abs(trace_limit_fixed_point_residual(mu, c)) < 1e-10


@pytest.mark.parametrize("c", [0.999, 1.0, 1.001])
@pytest.mark.parametrize("mu", [1e-12, 1e-10, 1e-8, 1e-6])
def test_trace_limit_fixed_point_small_mu_near_c_one(c, mu):
    t = trace_limit(mu, c)
    assert abs(trace_limit_fixed_point_residual(mu, c)) <= 1e-10 * t


def test_trace_limit_small_mu_at_c_one():
    # mu T^2 + mu T = 1 at c = 1, so T = 1/sqrt(mu) - 1/2 + O(sqrt(mu))
    mu = 1e-12
    assert trace_limit(mu, 1.0) == pytest.approx(1.0 / math.sqrt(mu) - 0.5, rel=1e-10)


@pytest.mark.parametrize("c", [1.1, 2.0, 5.0])
@pytest.mark.parametrize("mu", [1e-3, 0.5, 20.0])
def test_trace_limit_duality(c, mu):
    assert trace_limit(mu, c) == pytest.approx(c * c * trace_limit(c * mu, 1.0 / c), rel=1e-10)


@pytest.mark.parametrize("c", [0.1, 0.5, 0.9])
def test_mp_stieltjes_near_zero(c):
    # m(0-) = E[1/x] = 1/(1 - c) under the c < 1 law
    assert mp_stieltjes(-1e-12, c) == pytest.approx(1.0 / (1.0 - c), rel=1e-9)


def test_trace_branches_agree_at_c_one():
    left, right = trace_limit(0.7, 1.0 - 1e-9), trace_limit(0.7, 1.0 + 1e-9)
    assert left == pytest.approx(right, abs=1e-7)


@pytest.mark.parametrize("c", C_VALUES)
@pytest.mark.parametrize("mu", [0.01, 0.5, 4.0])
def test_logdet_closed_form_matches_quadrature(c, mu):
    assert logdet_limit(mu, c) == pytest.approx(logdet_limit_quadrature(mu, c), abs=1e-6)


def test_trace_is_derivative_of_logdet():
    c, mu, h = 0.6, 0.8, 1e-5
    slope = (logdet_limit(mu + h, c) - logdet_limit(mu - h, c)) / (2 * h)
    assert slope == pytest.approx(trace_limit(mu, c), rel=1e-6)


def test_limits_reject_bad_arguments():
    with pytest.raises(DomainError):
        trace_limit(0.0, 1.0)
    with pytest.raises(DomainError):
        logdet_limit(1.0, -1.0)


def test_gram_limits_match_monte_carlo(rng):
    n, d, ridge = 800, 400, 0.5
    X = rng.standard_normal((n, d))
    A = X @ X.T / d + ridge * np.eye(n)
    ctx = RmtContext(alpha=1.0, c=d / n).with_ridge(ridge)
    _, logdet = np.linalg.slogdet(A)
    assert np.trace(np.linalg.inv(A)) / n == pytest.approx(gram_trace_limit(ctx), rel=2e-2)
    assert logdet / n == pytest.approx(gram_logdet_limit(ctx), abs=2e-2)


def test_context_validation():
    with pytest.raises(DomainError):
        RmtContext(alpha=0.0, c=1.0)
    with pytest.raises(DomainError):
        RmtContext(alpha=1.0, c=1.0, beta0=-0.1)
    with pytest.raises(DomainError):
        RmtContext(alpha=1.0, c=1.0, beta0=0.2).with_ridge(1.0)
    with pytest.raises(DomainError):
        gram_trace_limit(RmtContext(alpha=1.0, c=1.0))


def test_scaled_context_resolves_beta():
    ctx = RmtContext(alpha=2.0, c=1.0, beta0=0.25)
    assert ctx.scaled
    assert ctx.beta_at(4.0) == 1.0
    assert ctx.with_ridge(1.0, lam=4.0).mu_arg == pytest.approx(1.0)


def test_limiting_free_energy_reference_value():
    ctx = RmtContext(alpha=1.0, c=0.5)
    assert limiting_free_energy(1.0, 1.0, ctx) == pytest.approx(1.519676, abs=1e-5)


def test_optimal_gamma_golden_ratio():
    assert optimal_gamma(1.0, RmtContext(alpha=1.0, c=1.0)) == pytest.approx(GOLDEN, abs=1e-10)


@pytest.mark.parametrize("c", [0.25, 1.0, 4.0])
@pytest.mark.parametrize("alpha,beta", [(1.0, 0.0), (0.27, 0.59)])
def test_optimal_gamma_minimizes_free_energy(c, alpha, beta):
    ctx = RmtContext(alpha=alpha, c=c, beta=beta)
    mu = 0.5
    numeric, _ = minimize_scalar(lambda g: limiting_free_energy(mu / g, g, ctx), 1e-6, 1e6, log_scale=True)
    assert optimal_gamma(mu, ctx) == pytest.approx(numeric, rel=1e-6)


def test_alternative_gamma_form_differs():
    ctx = RmtContext(alpha=1.0, c=0.5)
    assert abs(optimal_gamma_alternative(1.0, ctx) - optimal_gamma(1.0, ctx)) > 1e-3


def test_optimal_gamma_needs_fixed_beta():
    with pytest.raises(DomainError):
        optimal_gamma(1.0, RmtContext(alpha=1.0, c=1.0, beta0=0.1))


def test_optimal_lambda_reference_value():
    ctx = RmtContext(alpha=1.0, c=1.0, beta0=0.0)
    assert optimal_lambda(0.5, ctx) == pytest.approx(8.0 / 3.0, abs=1e-7)


@pytest.mark.parametrize("c", [0.25, 1.0, 4.0])
@pytest.mark.parametrize("beta0", [0.0, 0.3])
def test_optimal_lambda_minimizes_free_energy(c, beta0):
    ctx = RmtContext(alpha=1.0, c=c, beta0=beta0)
    gamma = 0.2
    numeric, _ = minimize_scalar(lambda lam: limiting_free_energy(lam, gamma, ctx), 1e-4, 1e4, log_scale=True)
    assert optimal_lambda(gamma, ctx) == pytest.approx(numeric, rel=1e-6)


@pytest.mark.parametrize("gamma,beta0", [(1.0, 0.0), (0.5, 0.5), (0.1, 1.0), (2.0, 0.0)])
def test_no_optimal_lambda(gamma, beta0):
    with pytest.raises(NoOptimalLambda) as info:
        optimal_lambda(gamma, RmtContext(alpha=1.0, c=1.0, beta0=beta0))
    assert info.value.gamma == gamma
    assert isinstance(info.value, ValueError)


def test_optimal_lambda_needs_scaled_context():
    with pytest.raises(DomainError):
        optimal_lambda(0.1, RmtContext(alpha=1.0, c=1.0))


@pytest.mark.parametrize("c", C_VALUES)
@pytest.mark.parametrize("g0", [0.05, 0.5, 0.9])
def test_optimal_mu_is_root(c, g0):
    mu = optimal_mu(g0, c)
    assert mu > 0
    assert abs(critical_point_residual(mu, g0, c)) < 1e-9 * max(1.0, mu * mu)


def test_optimal_mu_is_optimal_lambda_times_gamma0():
    # lambda-scaled with beta0 = 0: mu* = lambda* gamma
    g, c = 0.3, 2.0
    lam = optimal_lambda(g, RmtContext(alpha=1.0, c=c, beta0=0.0))
    assert optimal_mu(g, c) == pytest.approx(lam * g, rel=1e-12)


@pytest.mark.parametrize("gamma", [0.01, 0.1, 0.5])
@pytest.mark.parametrize("beta0", [0.0, 0.2])
def test_free_energy_curve_is_decreasing(gamma, beta0):
    curve = limiting_free_energy_curve(np.linspace(0.05, 5.0, 200), gamma, alpha=1.0, beta=beta0)
    assert np.all(np.diff(curve) < 0)


def test_free_energy_curve_marks_missing_optimum():
    curve = limiting_free_energy_curve([0.5, 1.0], 0.9, alpha=1.0, beta=0.2)
    assert np.all(np.isnan(curve))


def test_free_energy_curve_fixed_lambda():
    curve = limiting_free_energy_curve([0.5], 1.0, alpha=1.0, lam=1.0)
    assert curve[0] == pytest.approx(1.519676, abs=1e-5)


def test_fixed_beta_lambda_zero_offset_is_closed_form():
    ctx = RmtContext(alpha=1.0, c=2.0)
    assert optimal_lambda_fixed_beta(0.3, ctx) == optimal_lambda(0.3, RmtContext(alpha=1.0, c=2.0, beta0=0.0))


@pytest.mark.parametrize("c", [0.25, 1.0, 4.0])
def test_fixed_beta_lambda_is_stationary(c):
    ctx = RmtContext(alpha=0.27, c=c, beta=0.59)
    lam = optimal_lambda_fixed_beta(0.1, ctx)
    h = 1e-4
    slope = (limiting_free_energy(lam * (1 + h), 0.1, ctx) - limiting_free_energy(lam * (1 - h), 0.1, ctx)) / (2 * h)
    assert abs(slope) < 1e-6


def test_fixed_beta_lambda_missing_optimum():
    with pytest.raises(NoOptimalLambda) as info:
        optimal_lambda_fixed_beta(3.0, RmtContext(alpha=0.27, c=1.0, beta=0.59))
    assert info.value.fixed_beta


def test_policy_lambda_dispatch():
    scaled = RmtContext(alpha=1.0, c=1.0, beta0=0.2)
    fixed = RmtContext(alpha=0.27, c=1.0, beta=0.59)
    assert policy_lambda(0.1, scaled) == optimal_lambda(0.1, scaled)
    assert policy_lambda(0.1, fixed) == optimal_lambda_fixed_beta(0.1, fixed)
    with pytest.raises(DomainError):
        optimal_lambda_fixed_beta(0.1, scaled)
