"""Qualitative shapes of the shipped experiment configs under data/experiments."""
import math
from pathlib import Path

import numpy as np
import pytest

from src.harness import free_energy_limit, load_config, parse_config, run_sweep, run_terms

EXPERIMENTS = Path(__file__).resolve().parents[1] / "data" / "experiments"

pytestmark = pytest.mark.slow


def _sweep(name):
    records = run_sweep(load_config(EXPERIMENTS / f"{name}.json"), workers=1)
    assert not [r.error for r in records if r.error]
    return sorted(records, key=lambda r: (r.gamma, r.d))


def _overlap_below(prev, cur):
    return cur.mean < prev.mean + prev.ci_half_width + cur.ci_half_width


def _overlap_above(prev, cur):
    return cur.mean > prev.mean - prev.ci_half_width - cur.ci_half_width


@pytest.mark.parametrize("name,significant", [("free_energy_linear_optimal", True), ("free_energy_gaussian_optimal", False)])
def test_free_energy_decreases_at_optimal_lambda(name, significant):
    records = _sweep(name)
    for prev, cur in zip(records, records[1:]):
        assert _overlap_below(prev, cur), f"d={prev.d}->{cur.d}: {prev.mean:.4f} -> {cur.mean:.4f}"
    first, last = records[0], records[-1]
    assert last.mean < first.mean
    if significant:
        assert first.mean - last.mean > first.ci_half_width + last.ci_half_width


def test_free_energy_rises_again_at_fixed_small_lambda():
    records = _sweep("free_energy_linear_fixed")
    low = min(records, key=lambda r: r.mean)
    last = records[-1]
    assert low.d < last.d
    assert last.mean - low.mean > 2.0 * max(low.ci_half_width, last.ci_half_width)


def _peak_ratio(records):
    return max(r.mean for r in records) / max(records[0].mean, records[-1].mean)


def test_ppl2_double_descent_and_tempering():
    records = _sweep("ppl2_double_descent")
    cold = [r for r in records if r.gamma == 0.005]
    warm = [r for r in records if r.gamma == 0.5]
    n = cold[0].n

    peak = max(cold, key=lambda r: r.mean)
    assert abs(peak.d / n - 1.0) <= 0.15
    assert peak.mean > cold[0].mean and peak.mean > cold[-1].mean
    tail = [r for r in cold if r.d / n > 1.3]
    assert len(tail) >= 2
    for prev, cur in zip(tail, tail[1:]):
        assert _overlap_below(prev, cur), f"d={prev.d}->{cur.d}: {prev.mean:.4f} -> {cur.mean:.4f}"

    assert _peak_ratio(warm) < _peak_ratio(cold)


def test_gaussian_augmentation_lowers_free_energy():
    records = _sweep("augmented_gaussian")
    for prev, cur in zip(records, records[1:]):
        assert _overlap_below(prev, cur), f"d={prev.d}->{cur.d}: {prev.mean:.4f} -> {cur.mean:.4f}"
    first, last = records[0], records[-1]
    assert first.mean - last.mean > first.ci_half_width + last.ci_half_width


@pytest.mark.parametrize("name", ["augmented_copied", "augmented_padded"])
def test_redundant_augmentation_does_not_lower_free_energy(name):
    records = [r for r in _sweep(name) if r.d >= 60]
    assert len(records) >= 3
    for prev, cur in zip(records, records[1:]):
        assert _overlap_above(prev, cur), f"d={prev.d}->{cur.d}: {prev.mean:.4f} -> {cur.mean:.4f}"


def _limit_config(family, lambda_policy):
    return parse_config({
        "name": f"limit-{family}",
        "kernel": {"family": family},
        "metric": "free-energy",
        "n_grid": [250, 500, 1000, 2000],
        "c_grid": [0.5, 1.0, 2.0],
        "gamma": [0.1, 1.0],
        "lambda_policy": lambda_policy,
        "reps": 4,
        "seed": 6,
    })


@pytest.mark.parametrize("family", ["linear", "gaussian"])
@pytest.mark.parametrize("lambda_policy", [{"kind": "optimal"}, {"kind": "fixed", "value": 1.0}])
def test_free_energy_converges_to_limit(family, lambda_policy):
    # unit-variance labels integrated out: E[Y^T Q Y] = tr Q
    points, terms = run_terms(_limit_config(family, lambda_policy), workers=1)
    assert points
    dev = {}
    for p, t in zip(points, terms):
        empirical = 0.5 * p.lam * t[:, 1] + 0.5 * t[:, 2] - 0.5 * math.log(p.lam / (2.0 * math.pi))
        limit = free_energy_limit(p.kernel, p.lam, p.gamma, p.d / p.n)
        dev[(p.d / p.n, p.gamma, p.n)] = abs(float(np.mean(empirical)) - limit)

    for (c, gamma, n), value in dev.items():
        if n != 2000:
            continue
        assert value < 0.02, f"c={c:g}, gamma={gamma:g}: deviation {value:.4f}"
        assert value <= dev[(c, gamma, 250)] + 2e-3, f"c={c:g}, gamma={gamma:g}: no convergence trend"
