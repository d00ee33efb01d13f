"""
Tests for the linear SVM - separable toy data, the Pegasos schedule, determinism
"""

import numpy as np
import pytest

from model_switching.dataset import Dataset, DatasetSpec, generate, train_val_split
from model_switching.errors import InvalidArgumentError
from model_switching.metrics import evaluate
from model_switching.rng import rng_from_seed
from model_switching.svm import LinearSvm, LinearSvmParams, fit_linear_svm


def test_two_separable_points():
    """Test x=+1 labelled 1 and x=-1 labelled 0 are both classified correctly"""
    data = Dataset(np.array([[1.0], [-1.0]]), np.array([1, 0]))
    model = fit_linear_svm(data, LinearSvmParams(reg_lambda=0.1, epochs=5))
    assert model.predict(data.x).tolist() == [1, 0]
    margins = model.predict_score(data.x)
    assert margins[0] > 0 > margins[1]


def test_weights_are_scaled_violator_sums():
    """Test lambda * t * w is an integer combination of the signed rows"""
    data = Dataset(np.array([[1.0], [-1.0]]), np.array([1, 0]))
    lam, epochs = 0.1, 5
    model = fit_linear_svm(data, LinearSvmParams(reg_lambda=lam, epochs=epochs))
    # signed augmented rows are (1, 1) and (1, -1): w * lam * T = (a + b, a - b)
    scaled = model.weights_ * lam * (epochs * 2)
    a = (scaled[0] + scaled[1]) / 2
    b = (scaled[0] - scaled[1]) / 2
    assert a == pytest.approx(round(a), abs=1e-9) and round(a) >= 1
    assert b == pytest.approx(round(b), abs=1e-9) and round(b) >= 1


def test_bias_is_last_weight(small_split):
    """Test coef_ and intercept_ split the weight vector"""
    train, val = small_split
    model = fit_linear_svm(train, LinearSvmParams(epochs=3))
    assert model.weights_.shape == (train.n_features + 1,)
    assert np.array_equal(model.coef_, model.weights_[:-1])
    expected = val.x @ model.coef_ + model.intercept_
    assert np.allclose(model.predict_score(val.x), expected)


def test_predict_matches_margin_sign(small_split, probe_matrix):
    """Test class 1 exactly when the margin is nonnegative"""
    train, _ = small_split
    model = fit_linear_svm(train, LinearSvmParams(epochs=3))
    margins = model.predict_score(probe_matrix)
    assert np.array_equal(model.predict(probe_matrix), (margins >= 0).astype(int))


def test_same_seed_same_weights(small_split):
    """Test the visiting order comes only from the seed"""
    train, _ = small_split
    a = fit_linear_svm(train, LinearSvmParams(epochs=4, seed=1))
    b = fit_linear_svm(train, LinearSvmParams(epochs=4, seed=1))
    c = fit_linear_svm(train, LinearSvmParams(epochs=4, seed=2))
    assert a.weights_.tobytes() == b.weights_.tobytes()
    assert not np.array_equal(a.weights_, c.weights_)


def test_params_validation():
    """Test lambda must be positive and epochs at least one"""
    with pytest.raises(InvalidArgumentError):
        LinearSvmParams(reg_lambda=0.0)
    with pytest.raises(InvalidArgumentError):
        LinearSvmParams(epochs=0)


def test_separated_classes_are_learned():
    """Test class_sep=3 data reaches 85% validation accuracy"""
    spec = DatasetSpec(
        n_samples=1000, n_features=20, n_informative=10, class_sep=3.0, seed=42
    )
    data = generate(spec)
    train, val = train_val_split(data, 0.2, rng_from_seed(42).split("split"))
    model = LinearSvm().fit(train)
    assert evaluate(model, val).accuracy >= 0.85
