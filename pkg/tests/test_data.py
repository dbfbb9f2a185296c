"""Tests for generators, whitening, augmentation, misspecification and CSV I/O."""
import numpy as np
import pytest

from src.data import (
    Dataset,
    DatasetMeta,
    augment,
    ill_conditioned_covariance,
    load_csv,
    misspec_diagnostic,
    misspecify_labels,
    normalize,
    save_csv,
    subsample,
    surrogate_covariates,
    synth_gaussian,
    theta0,
    whiten,
)
from src.utils.errors import DataFormatError, DegenerateData, DomainError


def test_dataset_is_read_only_and_filled_in():
    ds = Dataset(np.ones((3, 2)), [1.0, 2.0, 3.0])
    assert ds.meta.feature_names == ("x0", "x1")
    assert ds.meta.retained_features == (0, 1)
    assert ds.meta.label_variance == pytest.approx(2.0 / 3.0)
    with pytest.raises(ValueError):
        ds.X[0, 0] = 5.0
    with pytest.raises(DomainError):
        Dataset(np.ones((3, 2)), [1.0, 2.0])


def test_synth_gaussian_is_deterministic():
    a = synth_gaussian(50, 4, seed=9, stream=(1, 2))
    b = synth_gaussian(50, 4, seed=9, stream=(1, 2))
    c = synth_gaussian(50, 4, seed=9, stream=(1, 3))
    np.testing.assert_array_equal(a.X, b.X)
    np.testing.assert_array_equal(a.Y, b.Y)
    assert not np.array_equal(a.X, c.X)


def test_synth_gaussian_moments():
    ds = synth_gaussian(20000, 3, cov=[4.0, 1.0, 0.25], label_sd=2.0, seed=1)
    np.testing.assert_allclose(ds.X.var(axis=0), [4.0, 1.0, 0.25], rtol=0.05)
    assert ds.Y.std() == pytest.approx(2.0, rel=0.05)
    full = np.array([[2.0, 0.8], [0.8, 1.0]])
    ds = synth_gaussian(20000, 2, cov=full, seed=2)
    np.testing.assert_allclose(np.cov(ds.X.T), full, atol=0.08)


def test_synth_gaussian_rejects_bad_covariance():
    with pytest.raises(DomainError):
        synth_gaussian(5, 2, cov="diagonal")
    with pytest.raises(DomainError):
        synth_gaussian(5, 2, cov=[1.0, -1.0])
    with pytest.raises(DomainError):
        synth_gaussian(5, 2, cov=[[1.0, 2.0], [2.0, 1.0]])


def test_ill_conditioned_covariance():
    np.testing.assert_array_equal(ill_conditioned_covariance(4), [10.0, 10.0, 0.1, 0.1])


def test_whiten_post_conditions(rng):
    X = rng.standard_normal((500, 50)) @ rng.standard_normal((50, 50)) + 5.0
    Y = 3.0 * rng.standard_normal(500) + 1.0
    ds = whiten(X, Y)
    assert ds.meta.whitened
    np.testing.assert_allclose(ds.X.mean(axis=0), 0.0, atol=1e-10)
    np.testing.assert_allclose(ds.X.T @ ds.X / 500, np.eye(50), atol=1e-8)
    assert ds.Y.mean() == pytest.approx(0.0, abs=1e-12)
    assert ds.Y.std() == pytest.approx(1.0, abs=1e-12)
    assert ds.meta.label_variance == pytest.approx(1.0)


def test_whiten_is_idempotent(rng):
    once = whiten(rng.standard_normal((200, 10)) * [1, 2, 3, 4, 5, 6, 7, 8, 9, 10], rng.standard_normal(200))
    twice = whiten(once.X, once.Y)
    np.testing.assert_allclose(twice.X, once.X, atol=1e-8)
    np.testing.assert_allclose(twice.Y, once.Y, atol=1e-12)


def test_whiten_drops_dependent_columns(rng):
    X = rng.standard_normal((100, 4))
    X = np.column_stack([X, X[:, 0] + 2.0 * X[:, 1]])
    ds = whiten(X, rng.standard_normal(100), feature_names=["a", "b", "c", "d", "e"])
    assert ds.d == 4
    assert len(ds.meta.retained_features) == 4
    assert set(ds.meta.feature_names) <= {"a", "b", "c", "d", "e"}
    assert {"c", "d"} <= set(ds.meta.feature_names)
    np.testing.assert_allclose(ds.X.T @ ds.X / 100, np.eye(4), atol=1e-8)


def test_whiten_degenerate_inputs(rng):
    with pytest.raises(DegenerateData):
        whiten(np.ones((10, 3)), rng.standard_normal(10))
    with pytest.raises(DegenerateData):
        whiten(rng.standard_normal((10, 3)), np.ones(10))
    with pytest.raises(DegenerateData):
        whiten(rng.standard_normal((1, 3)), [1.0])


def test_normalize_keeps_correlation(rng):
    Z = rng.standard_normal((300, 2))
    X = np.column_stack([Z[:, 0], Z[:, 0] + 0.1 * Z[:, 1], np.full(300, 7.0)])
    ds = normalize(X * [5.0, 0.2, 1.0], rng.standard_normal(300))
    assert ds.d == 2
    assert ds.meta.retained_features == (0, 1)
    np.testing.assert_allclose(ds.X.std(axis=0), 1.0, atol=1e-12)
    assert np.corrcoef(ds.X.T)[0, 1] > 0.9
    assert not ds.meta.whitened


def test_surrogate_covariates_need_whitening():
    ds = surrogate_covariates(400, 30, seed=5)
    assert ds.d == 30
    assert np.max(np.abs(ds.X.mean(axis=0))) > 0.5
    w = whiten(ds.X, ds.Y)
    assert w.d == 30


@pytest.fixture
def base():
    return synth_gaussian(20, 30, seed=3)


def test_augment_gaussian(base):
    out = augment(base, "gaussian", 75, seed=4)
    assert out.d == 75
    np.testing.assert_array_equal(out.X[:, :30], base.X)
    assert out.meta.retained_features[30:] == (-1,) * 45
    np.testing.assert_array_equal(out.Y, base.Y)


def test_augment_copied(base):
    out = augment(base, "copied", 65)
    np.testing.assert_array_equal(out.X[:, 30], out.X[:, 0])
    np.testing.assert_array_equal(out.X[:, 64], out.X[:, 4])
    assert out.meta.retained_features[64] == 4


def test_augment_padded_and_identity(base):
    out = augment(base, "padded", 40)
    assert np.all(out.X[:, 30:] == 0.0)
    same = augment(base, "padded", 30)
    np.testing.assert_array_equal(same.X, base.X)


def test_augment_errors(base):
    with pytest.raises(DomainError):
        augment(base, "mirrored", 40)
    with pytest.raises(DomainError):
        augment(base, "gaussian", 10)


def test_theta0_modes():
    np.testing.assert_allclose(theta0("small", 10, 4), 0.5)
    np.testing.assert_allclose(theta0("large", 10, 4), 5.0)
    np.testing.assert_array_equal(theta0("growing", 10, 4), 1.0)
    np.testing.assert_array_equal(theta0("zero", 10, 4), 0.0)
    with pytest.raises(DomainError):
        theta0("huge", 10, 4)


def test_misspecify_labels(base):
    out = misspecify_labels(base, "growing", noise_sd=1e-9, seed=1)
    np.testing.assert_allclose(out.Y, base.X.sum(axis=1), atol=1e-7)
    np.testing.assert_array_equal(out.X, base.X)
    assert out.meta.label_variance == pytest.approx(np.var(out.Y))


def test_misspec_diagnostic():
    assert misspec_diagnostic(np.ones(4)) == (4.0, 4.0)
    var, bound = misspec_diagnostic([1.0, -1.0])
    assert (var, bound) == (2.0, 0.0)


def test_subsample(base):
    sub = subsample(base, 7, seed=2, stream=(0,))
    assert sub.n == 7
    rows = [int(np.flatnonzero((base.X == row).all(axis=1))[0]) for row in sub.X]
    assert rows == sorted(rows)
    with pytest.raises(DomainError):
        subsample(base, 21)


def test_csv_round_trip_is_exact(tmp_path, rng):
    ds = Dataset(rng.standard_normal((6, 3)) * 1e-3, rng.standard_normal(6),
                 DatasetMeta(feature_names=("a", "b", "c"), label_name="target"))
    path = tmp_path / "data.csv"
    save_csv(ds, path)
    back = load_csv(path, "target")
    np.testing.assert_array_equal(back.X, ds.X)
    np.testing.assert_array_equal(back.Y, ds.Y)
    assert back.meta.feature_names == ("a", "b", "c")


def test_load_csv_label_may_be_any_column(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("y,u,v\n1,2,3\n4,5,6\n")
    ds = load_csv(path, "y")
    np.testing.assert_array_equal(ds.Y, [1.0, 4.0])
    np.testing.assert_array_equal(ds.X, [[2.0, 3.0], [5.0, 6.0]])


def test_load_csv_missing_label_lists_columns(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(DataFormatError, match="available columns: a, b"):
        load_csv(path, "y")


def test_load_csv_non_numeric_cell(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("a,y\n1,2\n3,oops\n")
    with pytest.raises(DataFormatError, match="line 3, column 'y'"):
        load_csv(path, "y")


def test_load_csv_empty_cell_and_empty_file(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("a,y\n1,\n")
    with pytest.raises(DataFormatError):
        load_csv(path, "y")
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(DataFormatError):
        load_csv(empty, "y")
    header_only = tmp_path / "header.csv"
    header_only.write_text("a,y\n")
    with pytest.raises(DataFormatError, match="no data rows"):
        load_csv(header_only, "y")


def test_gaussian_augmentation_then_whitening_is_white():
    raw = surrogate_covariates(600, 30, seed=8)
    base = whiten(raw.X, raw.Y)
    out = augment(base, "gaussian", 90, seed=9)
    again = whiten(out.X, out.Y)
    assert again.d == 90
    assert again.meta.whitened
    np.testing.assert_allclose(again.X.mean(axis=0), 0.0, atol=1e-10)
    np.testing.assert_allclose(again.X.T @ again.X / 600, np.eye(90), atol=1e-8)
