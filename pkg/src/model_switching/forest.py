"""
Random forests: bagged CART trees with per-node feature subsampling.

Tree i draws its bootstrap resample from stream ``bootstrap/i`` and its
per-node feature subsets from stream ``tree/i``, both children of the
forest seed. Trees are independent given those streams, so they can be
grown on any number of joblib workers with identical results.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
import structlog
from joblib import Parallel, delayed

from .classifier import Classifier, Params
from .dataset import Dataset
from .errors import InvalidArgumentError
from .matrix import Labels, Matrix
from .rng import rng_from_seed
from .tree import Tree, TreeParams, fit_tree

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class ForestParams(Params):
    """
    :param n_estimators: Number of trees.
    :param max_depth: Depth bound per tree; None for unbounded.
    :param min_samples_leaf: Minimum rows per leaf.
    :param min_samples_split: Minimum rows to split a node.
    :param features_per_split: Candidates per node; None = floor(sqrt(n_features)).
    :param bootstrap: Resample rows with replacement per tree.
    :param seed: Forest seed.
    """

    n_estimators: int = 100
    max_depth: Optional[int] = None
    min_samples_leaf: int = 1
    min_samples_split: int = 2
    features_per_split: Optional[int] = None
    bootstrap: bool = True
    seed: int = 42

    def __post_init__(self):
        if self.n_estimators < 1:
            raise InvalidArgumentError(
                f"n_estimators must be >= 1, got {self.n_estimators}"
            )
        self.tree_params(1)

    def tree_params(self, n_features: int) -> TreeParams:
        """Per-tree growth controls with ``features_per_split`` resolved."""
        k = self.features_per_split
        if k is None:
            k = max(1, math.isqrt(n_features))
        return TreeParams(
            max_depth=self.max_depth,
            min_samples_leaf=self.min_samples_leaf,
            min_samples_split=self.min_samples_split,
            features_per_split=k,
            seed=self.seed,
        )


class RandomForest(Classifier):
    """
    Majority vote of bagged trees.

    ``predict`` counts hard votes (leaf value >= 0.5); a tied vote goes to
    class 0. ``predict_score`` is the mean leaf value, which always lies in
    [0, 1] but is not what ``predict`` thresholds.
    """

    kind = "random_forest"

    def __init__(self, params: Optional[ForestParams] = None, n_jobs: int = 1):
        super().__init__(params or ForestParams())
        self.n_jobs = n_jobs
        self.trees_: List[Tree] = []

    def _fit(self, train: Dataset) -> None:
        n, d = train.n_samples, train.n_features
        tree_params = self.params.tree_params(d)
        if tree_params.features_per_split > d:
            raise InvalidArgumentError(
                f"features_per_split must be in [1, {d}], "
                f"got {tree_params.features_per_split}"
            )
        root = rng_from_seed(self.params.seed)

        def grow(i: int) -> Tree:
            if self.params.bootstrap:
                rows = root.split(f"bootstrap/{i}").integers(n, n)
            else:
                rows = np.arange(n)
            return fit_tree(train, rows, tree_params, root.split(f"tree/{i}"))

        self.trees_ = Parallel(n_jobs=self.n_jobs, prefer="threads")(
            delayed(grow)(i) for i in range(self.params.n_estimators)
        )
        logger.debug(
            "forest_fitted",
            n_trees=len(self.trees_),
            n_rows=n,
            mean_depth=float(np.mean([t.depth for t in self.trees_])),
        )

    def tree_votes(self, x) -> np.ndarray:
        """
        Hard vote of every tree, shape ``(n_trees, n_rows)``.

        :raises InvalidArgumentError: On a feature width mismatch.
        """
        return (self._leaf_values(self._check(x)) >= 0.5).astype(np.int64)

    def _leaf_values(self, x: Matrix) -> np.ndarray:
        return np.stack([tree.predict_value(x) for tree in self.trees_])

    def _predict(self, x: Matrix) -> Labels:
        ones = (self._leaf_values(x) >= 0.5).sum(axis=0)
        return (2 * ones > len(self.trees_)).astype(np.int64)

    def _score(self, x: Matrix) -> np.ndarray:
        return self._leaf_values(x).mean(axis=0)

    def get_state(self) -> Dict[str, Any]:
        return {
            "n_features": self.n_features_,
            "trees": [tree.to_nodes() for tree in self.trees_],
        }

    @classmethod
    def from_state(cls, params: ForestParams, state: Dict[str, Any]) -> "RandomForest":
        model = cls(params)
        model.n_features_ = int(state["n_features"])
        model.trees_ = [
            Tree.from_nodes(nodes, model.n_features_) for nodes in state["trees"]
        ]
        return model


def fit_forest(
    train: Dataset, params: Optional[ForestParams] = None, n_jobs: int = 1
) -> RandomForest:
    """Fit a :class:`RandomForest`; ``n_jobs`` only changes speed."""
    return RandomForest(params, n_jobs=n_jobs).fit(train)
