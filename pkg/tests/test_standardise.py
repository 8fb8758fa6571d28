"""Scale statistics, linear standardisation and the fitted-parameter store."""

import json

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from oracles import quantile_by_hand
from scaledist.standardise import (
    LINEAR_METHODS,
    POOLED_METHODS,
    Standardiser,
    fit_standardiser,
    quantile,
    scale_statistic,
    standardise_matrix,
)


def test_quantile_examples():
    assert quantile([1, 2, 3, 4], 0.5) == 2.5
    assert quantile([1, 2, 3, 4, 5], 0.25) == 2.0
    assert quantile([7], 0.3) == 7.0
    assert quantile([3, 1, 2], 0.0) == 1.0
    assert quantile([3, 1, 2], 1.0) == 3.0


def test_quantile_matches_hand_interpolation():
    rng = np.random.default_rng(42)
    for _ in range(200):
        n = int(rng.integers(1, 40))
        values = rng.standard_normal(n) * 10
        prob = float(rng.uniform())
        assert_allclose(
            quantile(values, prob), quantile_by_hand(values, prob), rtol=0, atol=1e-12
        )


def test_quantile_rejects_bad_input():
    with pytest.raises(ValueError):
        quantile([], 0.5)
    with pytest.raises(ValueError):
        quantile([1.0], 1.5)
    with pytest.raises(ValueError):
        quantile([np.nan], 0.5)


def test_scale_statistic_examples():
    assert scale_statistic([1, 2, 3, 4, 100], "mad") == 1.0
    assert scale_statistic([1, 2, 5], "range") == 4.0
    assert scale_statistic([0, 2, 4], "unit_variance") == 2.0

    col = np.array([0.0, 2.0, 0.0, 4.0])
    y = np.array([1, 1, 2, 2])
    assert scale_statistic(col, "pooled_mad_weights", y) == 1.5
    assert scale_statistic(col, "pooled_mad_shift", y) == 1.5
    assert scale_statistic(col, "pooled_range_shift", y) == 4.0
    # class ranges 2 and 4, sizes 2 and 2
    assert scale_statistic(col, "pooled_range_weights", y) == 3.0
    # class variances 2 and 8, pooled numerator (1*2 + 1*8) over n - k = 2
    assert scale_statistic(col, "pooled_variance", y) == pytest.approx(np.sqrt(5.0))


def test_scale_statistic_pooled_needs_labels():
    for method in POOLED_METHODS:
        with pytest.raises(ValueError):
            scale_statistic([1.0, 2.0, 3.0, 4.0], method)


def test_scale_statistic_degenerate_class():
    col = np.array([1.0, 2.0, 3.0])
    with pytest.raises(ValueError, match="class 2"):
        scale_statistic(col, "pooled_variance", [1, 1, 2])
    # MAD and range pooling only need one observation per class
    assert scale_statistic(col, "pooled_range_weights", [1, 1, 2]) >= 0.0


def test_scale_statistic_unknown_method():
    with pytest.raises(ValueError):
        scale_statistic([1.0, 2.0], "zscore")


def test_standardise_matrix_examples():
    X = np.array([[0.0], [2.0], [4.0]])
    assert_array_equal(standardise_matrix(X, "none"), X)
    assert_array_equal(standardise_matrix(X, "unit_variance"), [[0.0], [1.0], [2.0]])


def test_constant_column_goes_to_zero_with_warning():
    X = np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
    with pytest.warns(UserWarning, match=r"column\(s\) 2"):
        out = standardise_matrix(X, "range")
    assert_array_equal(out[:, 1], 0.0)
    assert np.all(out[:, 0] != 0.0)


def test_zero_mad_with_positive_variance():
    # majority ties force MAD to 0 while the variance stays positive
    X = np.array([[0.0], [0.0], [0.0], [5.0], [0.0]])
    with pytest.warns(UserWarning):
        out = standardise_matrix(X, "mad")
    assert_array_equal(out[:, 0], 0.0)
    assert np.any(standardise_matrix(X, "unit_variance") != 0.0)


@pytest.mark.parametrize("method", LINEAR_METHODS)
def test_scale_equivariance(method):
    # multiplying the data by c > 0 must not change the standardised matrix
    rng = np.random.default_rng(5)
    X = rng.standard_normal((20, 6))
    y = np.repeat([1, 2], 10)
    labels = y if method in POOLED_METHODS else None
    base = standardise_matrix(X, method, labels)
    for c in (1e-6, 3.0, 1e6):
        scaled = standardise_matrix(c * X, method, labels)
        assert_allclose(scaled, base, rtol=1e-12, atol=1e-12)


def test_pooled_variance_numerator_identity():
    # sum_l (n_l - 1) s_l^2 equals the pooled centered sum of squares
    rng = np.random.default_rng(19)
    for _ in range(50):
        n1, n2, n3 = rng.integers(2, 12, size=3)
        col = rng.standard_normal(n1 + n2 + n3) * 4
        y = np.repeat([1, 2, 3], [n1, n2, n3])
        lhs = 0.0
        centered_sq = 0.0
        for cls, size in ((1, n1), (2, n2), (3, n3)):
            part = col[y == cls]
            lhs += (size - 1) * part.var(ddof=1)
            centered_sq += ((part - part.mean()) ** 2).sum()
        assert_allclose(lhs, centered_sq, rtol=1e-12)
        pooled = scale_statistic(col, "pooled_variance", y)
        assert_allclose(pooled, np.sqrt(centered_sq / (len(col) - 3)), rtol=1e-12)


def test_fit_standardiser_round_trips_through_json(tmp_path):
    rng = np.random.default_rng(23)
    X = rng.standard_normal((16, 4)) * [1.0, 10.0, 0.1, 100.0]
    for method in ("none", "mad", "unit_variance", "range"):
        fitted = fit_standardiser(X, method)
        path = tmp_path / (method + ".json")
        fitted.save(path)
        loaded = Standardiser.from_json_dict(json.loads(path.read_text()))
        assert loaded.method == method
        assert_array_equal(loaded.transform(X), fitted.transform(X))


def test_transform_rejects_wrong_width():
    X = np.ones((4, 3)) * [[1.0, 2.0, 3.0]]
    X[0] = 0.0
    fitted = fit_standardiser(X, "range")
    with pytest.raises(ValueError):
        fitted.transform(np.ones((2, 5)))


def test_fitted_scales_are_training_only():
    # the returned object stores plain numbers; transforming new data cannot
    # update them
    rng = np.random.default_rng(31)
    X_train = rng.standard_normal((12, 3))
    fitted = fit_standardiser(X_train, "mad")
    before = fitted.to_json_dict()
    fitted.transform(rng.standard_normal((200, 3)) * 1e6)
    assert fitted.to_json_dict() == before
