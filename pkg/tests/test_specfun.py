"""Tests for the digamma function and its summation identities."""
import math

import numpy as np
import pytest
from scipy import special

from src.specfun import (
    EULER_GAMMA,
    digamma,
    expected_logdet_wishart,
    sum_digamma,
    sum_digamma_direct,
    sum_digamma_half,
    sum_digamma_half_closed,
    sum_digamma_half_direct,
)
from src.utils.errors import DomainError


def test_digamma_at_one_is_minus_euler_gamma():
    assert digamma(1.0) == pytest.approx(-EULER_GAMMA, abs=1e-14)


def test_digamma_at_half():
    assert digamma(0.5) == pytest.approx(-EULER_GAMMA - 2 * math.log(2), abs=1e-13)


def test_digamma_matches_scipy_over_a_wide_range():
    z = np.concatenate([np.geomspace(1e-3, 10.0, 200), np.geomspace(10.0, 1e8, 100)])
    np.testing.assert_allclose(digamma(z), special.digamma(z), rtol=1e-13, atol=1e-12)


def test_digamma_recurrence():
    z = np.linspace(0.1, 30.0, 50)
    np.testing.assert_allclose(digamma(z + 1.0), digamma(z) + 1.0 / z, atol=1e-12)


def test_digamma_keeps_array_shape():
    out = digamma(np.ones((2, 3)))
    assert out.shape == (2, 3)
    assert isinstance(digamma(2.0), float)


@pytest.mark.parametrize("bad", [0.0, -1.0, -2.5, float("nan"), float("inf")])
def test_digamma_rejects_non_positive_and_non_finite(bad):
    with pytest.raises(DomainError):
        digamma(bad)


@pytest.mark.parametrize("n", [1, 2, 7, 50])
@pytest.mark.parametrize("z", [0.5, 1.0, 3.3])
def test_sum_digamma_closed_form(n, z):
    assert sum_digamma(n, z) == pytest.approx(sum_digamma_direct(n, z), rel=1e-12, abs=1e-12)


def test_sum_digamma_single_term():
    assert sum_digamma(1, 2.0) == pytest.approx(digamma(3.0), abs=1e-13)


@pytest.mark.parametrize("n,d", [(4, 2), (10, 3), (50, 20), (101, 99)])
def test_sum_digamma_half_closed_form(n, d):
    assert sum_digamma_half_closed(n, d) == pytest.approx(sum_digamma_half_direct(n, d), rel=1e-12, abs=1e-12)


def test_sum_digamma_half_closed_form_refuses_boundary():
    with pytest.raises(DomainError):
        sum_digamma_half_closed(4, 3)


def test_sum_digamma_half_uses_direct_sum_at_boundary():
    assert sum_digamma_half(4, 3) == pytest.approx(sum_digamma_half_direct(4, 3), abs=1e-14)
    with pytest.raises(DomainError):
        sum_digamma_half(3, 3)


def test_expected_logdet_wishart_against_monte_carlo(rng):
    n, d = 10, 3
    W = rng.standard_normal((20000, n, d))
    _, logdet = np.linalg.slogdet(np.einsum("bij,bik->bjk", W, W))
    assert expected_logdet_wishart(n, d) == pytest.approx(float(np.mean(logdet)), abs=0.05)


def test_expected_logdet_wishart_needs_d_le_n():
    with pytest.raises(DomainError):
        expected_logdet_wishart(2, 3)


def test_digamma_asymptotic_bound():
    # psi(z) = ln z - 1/(2z) - 1/(12 z^2) + O(z^-4)
    z = np.geomspace(1.0, 1e6, 60)
    assert np.all(np.abs(digamma(z) - (np.log(z) - 0.5 / z)) <= 0.1 / z ** 2)


@pytest.mark.parametrize("z", [0.5, 1.0, 2.5, 10.0])
def test_sum_digamma_closed_form_full_grid(z):
    for n in range(1, 51):
        assert abs(sum_digamma(n, z) - sum_digamma_direct(n, z)) < 1e-10
