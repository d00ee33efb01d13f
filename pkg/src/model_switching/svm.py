"""
Linear support-vector classifier trained in the primal by stochastic
subgradient descent on the hinge loss (Pegasos schedule).

Labels map to s ∈ {−1, +1} and every row gains a constant 1 feature that
carries the bias. At update t with row i:

    η = 1 / (λ t)
    w ← (1 − ηλ) w + η s_i x_i      if s_i ⟨w, x_i⟩ < 1
    w ← (1 − ηλ) w                  otherwise

Each epoch visits all rows in an order shuffled by stream ``epoch/e``. The
last iterate is the model; ``predict_score`` is the raw margin ⟨w, x⟩.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
import structlog

from .classifier import Classifier, Params
from .dataset import Dataset
from .errors import InvalidArgumentError, ModelFormatError
from .matrix import Labels, Matrix
from .rng import rng_from_seed

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class LinearSvmParams(Params):
    """
    :param reg_lambda: Regularization strength λ (> 0).
    :param epochs: Full passes over the training rows.
    :param seed: Seed for the visiting order.
    """

    reg_lambda: float = 1e-4
    epochs: int = 20
    seed: int = 42

    def __post_init__(self):
        if not self.reg_lambda > 0:
            raise InvalidArgumentError(
                f"reg_lambda must be positive, got {self.reg_lambda}"
            )
        if self.epochs < 1:
            raise InvalidArgumentError(f"epochs must be >= 1, got {self.epochs}")


class LinearSvm(Classifier):
    """Linear SVM; class 1 iff the margin is >= 0."""

    kind = "linear_svm"
    score_threshold = 0.0

    def __init__(self, params: Optional[LinearSvmParams] = None):
        super().__init__(params or LinearSvmParams())
        self.weights_: Optional[np.ndarray] = None

    def _fit(self, train: Dataset) -> None:
        lam = self.params.reg_lambda
        n = train.n_samples
        x = np.hstack([train.x, np.ones((n, 1))])
        signs = 2.0 * train.y - 1.0
        w = np.zeros(x.shape[1])
        root = rng_from_seed(self.params.seed).split("svm")
        t = 0
        for epoch in range(self.params.epochs):
            for i in root.split(f"epoch/{epoch}").permutation(n):
                t += 1
                eta = 1.0 / (lam * t)
                margin = signs[i] * float(np.dot(w, x[i]))
                w = (1.0 - eta * lam) * w
                if margin < 1.0:
                    w = w + (eta * signs[i]) * x[i]
        self.weights_ = w
        logger.debug("svm_fitted", n_rows=n, n_updates=t, bias=float(w[-1]))

    @property
    def coef_(self) -> np.ndarray:
        return self.weights_[:-1]

    @property
    def intercept_(self) -> float:
        return float(self.weights_[-1])

    def _score(self, x: Matrix) -> np.ndarray:
        return (x * self.weights_[:-1]).sum(axis=1) + self.weights_[-1]

    def _predict(self, x: Matrix) -> Labels:
        return (self._score(x) >= 0.0).astype(np.int64)

    def get_state(self) -> Dict[str, Any]:
        return {
            "n_features": self.n_features_,
            "weights": [float(v) for v in self.weights_],
        }

    @classmethod
    def from_state(cls, params: LinearSvmParams, state: Dict[str, Any]) -> "LinearSvm":
        model = cls(params)
        model.n_features_ = int(state["n_features"])
        weights = np.asarray(state["weights"], dtype=np.float64)
        if weights.shape != (model.n_features_ + 1,) or not np.all(
            np.isfinite(weights)
        ):
            raise ModelFormatError(
                f"expected {model.n_features_ + 1} finite weights (bias last), "
                f"got shape {weights.shape}"
            )
        model.weights_ = weights
        return model


def fit_linear_svm(
    train: Dataset, params: Optional[LinearSvmParams] = None
) -> LinearSvm:
    """Fit a :class:`LinearSvm`."""
    return LinearSvm(params).fit(train)
