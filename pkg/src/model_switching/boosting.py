"""
Newton-boosted trees for binary logistic loss.

Per row i the model keeps a raw score F_i, starting at the log-odds of
``base_score``. Each round t:

    p_i = σ(F_i)
    g_i = p_i − y_i                  (gradient)
    h_i = p_i (1 − p_i)              (hessian)

    rows, columns ← subsamples drawn from stream ``boost/t``
    tree          ← grown on (g, h) of the sampled rows and columns
    F_i          += learning_rate · w(leaf(i))   for every row

with leaf weights w = −G/(H+λ) and split gain

    ½ [G_L²/(H_L+λ) + G_R²/(H_R+λ) − (G_L+G_R)²/(H_L+H_R+λ)] − γ

where G and H sum g and h over a node's sampled rows.
"""

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, NamedTuple, Optional

import numpy as np
import structlog

from .classifier import Classifier, Params
from .dataset import Dataset
from .errors import InvalidArgumentError
from .matrix import Matrix
from .rng import SeededRng, rng_from_seed
from .tree import Tree, grow_newton_tree

logger = structlog.get_logger(__name__)


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Logistic function, stable for large |z|."""
    return np.exp(-np.logaddexp(0.0, -z))


def logistic_loss(raw: np.ndarray, y: np.ndarray) -> float:
    """Mean logistic loss of raw scores ``raw`` against labels ``y``."""
    return float(np.mean(np.logaddexp(0.0, raw) - y * raw))


def subsample_size(fraction: float, n: int) -> int:
    """Rows (or columns) kept by a subsample fraction: round-half-up, at least 1."""
    return max(1, min(n, int(math.floor(fraction * n + 0.5))))


@dataclass(frozen=True)
class BoostParams(Params):
    """
    :param n_estimators: Boosting rounds.
    :param learning_rate: Shrinkage applied to every leaf weight.
    :param max_depth: Depth bound per tree.
    :param subsample: Fraction of rows per round, drawn without replacement.
    :param colsample_bytree: Fraction of features per round.
    :param reg_lambda: L2 penalty λ on leaf weights.
    :param gamma: Minimum gain γ a split must exceed.
    :param base_score: Prior probability; initial raw score is its log-odds.
    :param seed: Boosting seed.
    """

    n_estimators: int = 200
    learning_rate: float = 0.05
    max_depth: int = 10
    subsample: float = 0.8
    colsample_bytree: float = 0.8
    reg_lambda: float = 1.0
    gamma: float = 0.0
    base_score: float = 0.5
    seed: int = 42

    def __post_init__(self):
        checks = [
            (self.n_estimators >= 1, "n_estimators must be >= 1"),
            (self.learning_rate > 0, "learning_rate must be positive"),
            (self.max_depth >= 0, "max_depth must be >= 0"),
            (0 < self.subsample <= 1, "subsample must be in (0, 1]"),
            (0 < self.colsample_bytree <= 1, "colsample_bytree must be in (0, 1]"),
            (self.reg_lambda >= 0, "reg_lambda must be >= 0"),
            (self.gamma >= 0, "gamma must be >= 0"),
            (0 < self.base_score < 1, "base_score must be in (0, 1)"),
        ]
        for ok, message in checks:
            if not ok:
                raise InvalidArgumentError(f"{message}, got {self}")

    @property
    def base_margin(self) -> float:
        return math.log(self.base_score / (1.0 - self.base_score))


class BoostRound(NamedTuple):
    """What one boosting round saw and produced; passed to fit callbacks."""

    index: int
    grad: np.ndarray
    hess: np.ndarray
    rows: np.ndarray
    columns: np.ndarray
    tree: Tree


def _draw(rng: SeededRng, n: int, fraction: float) -> np.ndarray:
    k = subsample_size(fraction, n)
    if k == n:
        return np.arange(n)
    return np.sort(rng.sample(n, k))


class BoostedTrees(Classifier):
    """
    Additive tree model; ``predict_score`` is σ(F), ``predict`` is σ(F) >= 0.5.

    :ivar train_loss_: Mean training logistic loss before the first round
        and after every round.
    """

    kind = "boosted_trees"

    def __init__(
        self,
        params: Optional[BoostParams] = None,
        callback: Optional[Callable[[BoostRound], None]] = None,
    ):
        super().__init__(params or BoostParams())
        self.callback = callback
        self.trees_: List[Tree] = []
        self.train_loss_: List[float] = []

    def _fit(self, train: Dataset) -> None:
        p = self.params
        x, y = train.x, train.y
        n, d = x.shape
        root = rng_from_seed(p.seed)
        raw = np.full(n, p.base_margin)
        self.trees_ = []
        self.train_loss_ = [logistic_loss(raw, y)]
        for t in range(p.n_estimators):
            prob = sigmoid(raw)
            grad = prob - y
            hess = prob * (1.0 - prob)
            rng = root.split(f"boost/{t}")
            rows = _draw(rng, n, p.subsample)
            columns = _draw(rng, d, p.colsample_bytree)
            tree = grow_newton_tree(
                x[np.ix_(rows, columns)],
                grad[rows],
                hess[rows],
                columns,
                p.max_depth,
                p.reg_lambda,
                p.gamma,
            )
            raw = raw + p.learning_rate * tree.predict_value(x)
            self.trees_.append(tree)
            self.train_loss_.append(logistic_loss(raw, y))
            if self.callback is not None:
                self.callback(BoostRound(t, grad, hess, rows, columns, tree))
        logger.debug(
            "boosted_fitted",
            n_rounds=len(self.trees_),
            n_rows=n,
            final_train_loss=self.train_loss_[-1],
        )

    def raw_score(self, x) -> np.ndarray:
        """Additive raw scores F (log-odds) for the rows of ``x``."""
        return self._raw(self._check(x))

    def _raw(self, x: Matrix) -> np.ndarray:
        raw = np.full(x.shape[0], self.params.base_margin)
        for tree in self.trees_:
            raw = raw + self.params.learning_rate * tree.predict_value(x)
        return raw

    def _score(self, x: Matrix) -> np.ndarray:
        return sigmoid(self._raw(x))

    def get_state(self) -> Dict[str, Any]:
        return {
            "n_features": self.n_features_,
            "trees": [tree.to_nodes() for tree in self.trees_],
        }

    @classmethod
    def from_state(cls, params: BoostParams, state: Dict[str, Any]) -> "BoostedTrees":
        model = cls(params)
        model.n_features_ = int(state["n_features"])
        model.trees_ = [
            Tree.from_nodes(nodes, model.n_features_) for nodes in state["trees"]
        ]
        return model


def fit_boosted(
    train: Dataset,
    params: Optional[BoostParams] = None,
    callback: Optional[Callable[[BoostRound], None]] = None,
) -> BoostedTrees:
    """Fit a :class:`BoostedTrees` model, calling ``callback`` after every round."""
    return BoostedTrees(params, callback=callback).fit(train)
