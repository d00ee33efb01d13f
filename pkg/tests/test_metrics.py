"""
Tests for accuracy, confusion counts and accuracy display
"""

import numpy as np
import pytest

from model_switching.classifier import Classifier, Params
from model_switching.dataset import Dataset
from model_switching.errors import InvalidArgumentError
from model_switching.metrics import (
    EvalResult,
    accuracy,
    confusion_counts,
    evaluate,
    format_accuracy,
)


class FixedPredictions(Classifier):
    """Predicts a stored label vector regardless of input"""

    kind = "fixed"

    def __init__(self, labels):
        super().__init__(Params())
        self.labels = np.asarray(labels)
        self.n_features_ = 1

    def _fit(self, train):
        raise NotImplementedError

    def _score(self, x):
        return self.labels.astype(float)

    def get_state(self):
        return {}

    @classmethod
    def from_state(cls, params, state):
        raise NotImplementedError


def test_accuracy_examples():
    """Test three of four matches and perfect agreement"""
    assert accuracy([0, 1, 1, 0], [0, 1, 0, 0]) == 0.75
    assert accuracy([1, 1], [1, 1]) == 1.0


def test_accuracy_errors():
    """Test empty input, length mismatch and non-binary labels are rejected"""
    with pytest.raises(InvalidArgumentError):
        accuracy([], [])
    with pytest.raises(InvalidArgumentError, match="mismatch"):
        accuracy([0, 1], [0])
    with pytest.raises(InvalidArgumentError):
        accuracy([0, 2], [0, 1])


def test_confusion_counts():
    """Test (tn, fp, fn, tp) and that they sum to n"""
    y_true = [0, 0, 1, 1, 1]
    y_pred = [0, 1, 0, 1, 1]
    counts = confusion_counts(y_true, y_pred)
    assert counts == (1, 1, 1, 2)
    assert sum(counts) == 5


def test_accuracy_ignores_row_order():
    """Test permuting rows jointly leaves accuracy unchanged"""
    gen = np.random.default_rng(0)
    y_true = gen.integers(0, 2, size=101)
    y_pred = gen.integers(0, 2, size=101)
    order = gen.permutation(101)
    assert accuracy(y_true, y_pred) == accuracy(y_true[order], y_pred[order])


def test_evaluate_agrees_with_accuracy():
    """Test evaluate reports the same accuracy and counts as the helpers"""
    y = np.array([0, 1, 1, 0, 1])
    predicted = [1, 1, 0, 0, 1]
    data = Dataset(np.zeros((5, 1)), y)
    result = evaluate(FixedPredictions(predicted), data)
    assert result == EvalResult(0.6, 1, 1, 1, 2, 5)
    assert result.accuracy == accuracy(y, predicted)
    assert result.confusion == confusion_counts(y, predicted)


def test_evaluate_checks_width():
    """Test evaluating with the wrong feature count is rejected"""
    data = Dataset(np.zeros((2, 3)), np.array([0, 1]))
    with pytest.raises(InvalidArgumentError, match="expected 1 columns, got 3"):
        evaluate(FixedPredictions([0, 1]), data)


def test_format_accuracy_rounds_half_up():
    """Test two-decimal display with halves rounded up"""
    assert format_accuracy(0.945) == "0.95"
    assert format_accuracy(0.125) == "0.13"
    assert format_accuracy(1.0) == "1.00"
    assert format_accuracy(0.8) == "0.80"


def test_eval_result_to_dict():
    """Test the dictionary form carries the display string"""
    doc = EvalResult(0.75, 1, 0, 1, 2, 4).to_dict()
    assert doc["accuracy"] == 0.75
    assert doc["accuracy_display"] == "0.75"
    assert doc["n"] == 4
