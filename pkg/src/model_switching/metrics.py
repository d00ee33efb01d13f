"""
Accuracy and confusion counts.

Accuracy is computed as an integer match count divided once by n, so the
same predictions always give the same float.
"""

from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Tuple

import numpy as np

from .classifier import Classifier
from .dataset import Dataset
from .errors import InvalidArgumentError
from .matrix import as_labels


@dataclass(frozen=True)
class EvalResult:
    """
    Accuracy and confusion counts of predictions against true labels.

    :param accuracy: (tn + tp) / n.
    :param tn: True negatives.
    :param fp: False positives.
    :param fn: False negatives.
    :param tp: True positives.
    :param n: Number of rows.
    """

    accuracy: float
    tn: int
    fp: int
    fn: int
    tp: int
    n: int

    @property
    def confusion(self) -> Tuple[int, int, int, int]:
        return self.tn, self.fp, self.fn, self.tp

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["accuracy_display"] = format_accuracy(self.accuracy)
        return doc


def _check_pair(y_true, y_pred):
    y_true, y_pred = as_labels(y_true), as_labels(y_pred)
    if y_true.size != y_pred.size:
        raise InvalidArgumentError(
            f"label length mismatch: {y_true.size} true vs {y_pred.size} predicted"
        )
    if y_true.size == 0:
        raise InvalidArgumentError("accuracy of zero predictions is undefined")
    return y_true, y_pred


def confusion_counts(y_true, y_pred) -> Tuple[int, int, int, int]:
    """(tn, fp, fn, tp) of ``y_pred`` against ``y_true``."""
    y_true, y_pred = _check_pair(y_true, y_pred)
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    tn = int(np.sum((y_true == 0) & (y_pred == 0)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    return tn, fp, fn, tp


def accuracy(y_true, y_pred) -> float:
    """
    Fraction of exact matches.

    :raises InvalidArgumentError: On empty input, a length mismatch or
        non-binary labels.
    """
    y_true, y_pred = _check_pair(y_true, y_pred)
    return int(np.sum(y_true == y_pred)) / y_true.size


def evaluate(model: Classifier, data: Dataset) -> EvalResult:
    """
    Score ``model`` on ``data`` without changing either.

    :raises InvalidArgumentError: On a feature width mismatch or empty data.
    """
    tn, fp, fn, tp = confusion_counts(data.y, model.predict(data.x))
    n = tn + fp + fn + tp
    return EvalResult((tn + tp) / n, tn, fp, fn, tp, n)


def format_accuracy(value: float) -> str:
    """Two-decimal display of an accuracy, rounding halves up (0.945 -> "0.95")."""
    return str(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))
