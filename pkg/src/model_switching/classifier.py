"""
The classifier contract shared by every learner.

    fit(train)          Dataset → fitted model
    predict(x)          Matrix → labels in {0, 1}
    predict_score(x)    Matrix → one real score per row
    describe()          model kind + hyperparameters

Fitted models are never mutated by prediction, so they can be shared
between threads.
"""

from abc import ABC, abstractmethod
from dataclasses import asdict, fields
from typing import Any, ClassVar, Dict, Optional

import numpy as np

from .dataset import Dataset
from .errors import InvalidArgumentError, ModelFormatError
from .matrix import Labels, Matrix, as_matrix, check_width


class Params:
    """Mixin for frozen hyperparameter dataclasses."""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]):
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ModelFormatError(
                f"unknown {cls.__name__} fields: {', '.join(sorted(unknown))}"
            )
        return cls(**doc)


class Classifier(ABC):
    """
    Base class for binary classifiers.

    Subclasses implement ``_fit`` and ``_score`` plus the state hooks used by
    :mod:`model_switching.persistence`. ``predict`` thresholds the score at
    ``score_threshold`` unless a subclass overrides ``_predict``.
    """

    kind: ClassVar[str] = ""
    score_threshold: ClassVar[float] = 0.5

    def __init__(self, params: Params):
        self.params = params
        self.n_features_: Optional[int] = None

    @property
    def is_fitted(self) -> bool:
        return self.n_features_ is not None

    def fit(self, train: Dataset) -> "Classifier":
        """
        Fit on ``train`` and return ``self``.

        :raises InvalidArgumentError: If ``train`` has no rows.
        """
        if train.n_samples == 0:
            raise InvalidArgumentError("cannot fit on an empty dataset")
        self._fit(train)
        self.n_features_ = train.n_features
        return self

    def _check(self, x) -> Matrix:
        if not self.is_fitted:
            raise InvalidArgumentError(f"{self.kind} model is not fitted")
        x = as_matrix(x)
        check_width(x, self.n_features_)
        return x

    def predict(self, x) -> Labels:
        """Hard labels for the rows of ``x``."""
        return self._predict(self._check(x))

    def predict_score(self, x) -> np.ndarray:
        """Real-valued score for the rows of ``x``; larger means class 1."""
        return self._score(self._check(x))

    def _predict(self, x: Matrix) -> Labels:
        return (self._score(x) >= self.score_threshold).astype(np.int64)

    def describe(self) -> Dict[str, Any]:
        """Model kind and hyperparameters."""
        return {"model_kind": self.kind, "params": self.params.to_dict()}

    @abstractmethod
    def _fit(self, train: Dataset) -> None:
        ...

    @abstractmethod
    def _score(self, x: Matrix) -> np.ndarray:
        ...

    @abstractmethod
    def get_state(self) -> Dict[str, Any]:
        """Learned state as plain JSON-compatible data."""

    @classmethod
    @abstractmethod
    def from_state(cls, params: Params, state: Dict[str, Any]) -> "Classifier":
        """Rebuild a fitted model from :meth:`get_state` output."""

    def __repr__(self):
        status = f"n_features={self.n_features_}" if self.is_fitted else "unfitted"
        return f"{self.__class__.__name__}({self.params!r}, {status})"


def predict(model: Classifier, x) -> Labels:
    """Hard labels from ``model``; see :meth:`Classifier.predict`."""
    return model.predict(x)


def predict_score(model: Classifier, x) -> np.ndarray:
    """Scores from ``model``; see :meth:`Classifier.predict_score`."""
    return model.predict_score(x)
