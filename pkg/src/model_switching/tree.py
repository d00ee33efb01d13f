"""
Binary decision trees stored as flat node arrays.

Two growers share the storage and routing code:

    classification (CART)   criterion: weighted Gini decrease
                            leaf value: fraction of class-1 rows

    Newton (boosting)       criterion: ½[G_L²/(H_L+λ) + G_R²/(H_R+λ) − G²/(H+λ)] − γ
                            leaf value: −G/(H+λ)

Routing
───────
An internal node sends row r left iff ``x[r, feature] <= threshold``.
Thresholds sit at midpoints between consecutive distinct sorted values, so
a split depends only on the order of values within a feature.

Growth
──────
Each tree sorts its rows once per feature into an index matrix; a node owns
the slice of that matrix holding its rows, still sorted per column, and
hands each child a stable partition of it. Nodes are grown depth-first,
left child before right, so node ids follow preorder and children always
carry larger ids than their parent.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from .classifier import Classifier, Params
from .dataset import Dataset
from .errors import InvalidArgumentError, ModelFormatError
from .matrix import Labels, Matrix
from .rng import SeededRng, rng_from_seed

LEAF = -1


class Split(NamedTuple):
    """A chosen split and its score (impurity decrease or Newton gain)."""

    feature: int
    threshold: float
    improvement: float


@dataclass(frozen=True)
class TreeNode:
    """
    Read-only view of one node.

    Leaves have ``feature == -1`` and meaningful ``value``; internal nodes
    have child ids in ``left`` and ``right``.
    """

    feature: int
    threshold: float
    left: int
    right: int
    value: float

    @property
    def is_leaf(self) -> bool:
        return self.feature == LEAF


def gini_impurity(counts: Sequence[int]) -> float:
    """
    Gini impurity 1 − Σ (count_c / total)².

    :param counts: Per-class row counts.
    :raises InvalidArgumentError: If a count is negative or the total is zero.
    """
    if any(c < 0 for c in counts):
        raise InvalidArgumentError(f"class counts must be nonnegative, got {counts}")
    total = sum(counts)
    if total <= 0:
        raise InvalidArgumentError("gini impurity of an empty node is undefined")
    return 1.0 - sum((c / total) * (c / total) for c in counts)


def split_impurity_decrease(
    left_counts: Sequence[int], right_counts: Sequence[int]
) -> float:
    """
    Weighted Gini decrease of splitting a node into two nonempty children.

    Evaluated with the same floating-point operations as the vectorized
    search in :func:`best_split`, so both give bit-identical scores.
    """
    n_left, n_right = sum(left_counts), sum(right_counts)
    n = n_left + n_right
    parent = gini_impurity([a + b for a, b in zip(left_counts, right_counts)])
    weighted_left = n_left / n * gini_impurity(left_counts)
    weighted_right = n_right / n * gini_impurity(right_counts)
    return parent - (weighted_left + weighted_right)


def split_threshold(lower: float, upper: float) -> float:
    """
    Threshold between two consecutive distinct sorted values.

    The midpoint, unless rounding pushes it onto ``upper``; then ``lower``.
    """
    mid = (lower + upper) / 2.0
    return float(lower) if mid >= upper else float(mid)


def _pick(
    scores: np.ndarray, vals: np.ndarray, features: np.ndarray
) -> Optional[Split]:
    """Best (position, column) of a score grid; lowest column, then position wins."""
    best = scores.max() if scores.size else -np.inf
    if not best > 0:
        return None
    hits = scores == best
    col = int(np.argmax(hits.any(axis=0)))
    pos = int(np.argmax(hits[:, col]))
    threshold = split_threshold(vals[pos, col], vals[pos + 1, col])
    return Split(int(features[col]), threshold, float(best))


def _gini_split(
    vals: np.ndarray,
    labels: np.ndarray,
    features: np.ndarray,
    n_ones: int,
    min_samples_leaf: int,
) -> Optional[Split]:
    """
    Vectorized Gini search over presorted columns.

    :param vals: ``m x k`` feature values, each column sorted ascending.
    :param labels: Labels permuted alongside ``vals``.
    :param features: Global feature index of each column, ascending.
    """
    m = vals.shape[0]
    if m < 2 * min_samples_leaf:
        return None
    n_left = np.arange(1, m, dtype=np.float64)[:, None]
    n_right = m - n_left
    left_ones = np.cumsum(labels, axis=0)[:-1].astype(np.float64)
    right_ones = n_ones - left_ones
    left_zeros = n_left - left_ones
    right_zeros = n_right - right_ones

    p0, p1 = (m - n_ones) / m, n_ones / m
    parent = 1.0 - (p0 * p0 + p1 * p1)
    l0, l1 = left_zeros / n_left, left_ones / n_left
    r0, r1 = right_zeros / n_right, right_ones / n_right
    gini_left = 1.0 - (l0 * l0 + l1 * l1)
    gini_right = 1.0 - (r0 * r0 + r1 * r1)
    decrease = parent - (n_left / m * gini_left + n_right / m * gini_right)

    valid = (
        (vals[1:] > vals[:-1])
        & (n_left >= min_samples_leaf)
        & (n_right >= min_samples_leaf)
    )
    return _pick(np.where(valid, decrease, -np.inf), vals, features)


def _newton_split(
    vals: np.ndarray,
    grad: np.ndarray,
    hess: np.ndarray,
    features: np.ndarray,
    g_total: float,
    h_total: float,
    reg_lambda: float,
    gamma: float,
) -> Optional[Split]:
    if vals.shape[0] < 2:
        return None
    g_left = np.cumsum(grad, axis=0)[:-1]
    h_left = np.cumsum(hess, axis=0)[:-1]
    g_right = g_total - g_left
    h_right = h_total - h_left
    gain = (
        0.5
        * (
            g_left * g_left / (h_left + reg_lambda)
            + g_right * g_right / (h_right + reg_lambda)
            - g_total * g_total / (h_total + reg_lambda)
        )
        - gamma
    )
    valid = vals[1:] > vals[:-1]
    return _pick(np.where(valid, gain, -np.inf), vals, features)


def best_split(
    x: Matrix,
    y: Labels,
    rows,
    candidate_features,
    min_samples_leaf: int = 1,
) -> Optional[Split]:
    """
    Best Gini split of ``rows`` over ``candidate_features``.

    Ties go to the lowest feature index, then the lowest threshold.

    :return: The split, or None if no valid split decreases impurity.
    :raises InvalidArgumentError: If ``rows`` is empty.
    """
    rows = np.asarray(rows, dtype=np.intp)
    if rows.size == 0:
        raise InvalidArgumentError("best_split needs at least one row")
    features = np.unique(np.asarray(candidate_features, dtype=np.intp))
    values = np.asarray(x)[np.ix_(rows, features)]
    order = np.argsort(values, axis=0, kind="stable")
    vals = np.take_along_axis(values, order, axis=0)
    labels = np.asarray(y)[rows][order]
    n_ones = int(np.asarray(y)[rows].sum())
    return _gini_split(vals, labels, features, n_ones, min_samples_leaf)


class Tree:
    """
    A fitted tree as parallel arrays indexed by node id (root = 0).

    :ivar feature: Split feature per node, -1 at leaves.
    :ivar threshold: Split threshold per node.
    :ivar left: Left child id, -1 at leaves.
    :ivar right: Right child id, -1 at leaves.
    :ivar value: Leaf value; for grown trees also the node value at internal nodes.
    :ivar n_samples: Training rows reaching each node (None for loaded trees).
    """

    def __init__(self, feature, threshold, left, right, value, n_samples=None):
        self.feature = np.asarray(feature, dtype=np.intp)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.intp)
        self.right = np.asarray(right, dtype=np.intp)
        self.value = np.asarray(value, dtype=np.float64)
        self.n_samples = (
            None if n_samples is None else np.asarray(n_samples, dtype=np.intp)
        )

    @property
    def n_nodes(self) -> int:
        return int(self.feature.size)

    @property
    def is_leaf(self) -> np.ndarray:
        return self.feature == LEAF

    @property
    def leaves(self) -> np.ndarray:
        return np.flatnonzero(self.is_leaf)

    @property
    def depth(self) -> int:
        """Length of the longest root-to-leaf path; 0 for a single leaf."""
        depth = np.zeros(self.n_nodes, dtype=np.intp)
        for node in range(self.n_nodes):
            if self.feature[node] != LEAF:
                depth[self.left[node]] = depth[node] + 1
                depth[self.right[node]] = depth[node] + 1
        return int(depth.max())

    def node(self, i: int) -> TreeNode:
        return TreeNode(
            int(self.feature[i]),
            float(self.threshold[i]),
            int(self.left[i]),
            int(self.right[i]),
            float(self.value[i]),
        )

    def apply(self, x: Matrix) -> np.ndarray:
        """Leaf id reached by every row of ``x``."""
        x = np.asarray(x)
        node = np.zeros(x.shape[0], dtype=np.intp)
        active = np.flatnonzero(self.feature[node] != LEAF)
        while active.size:
            current = node[active]
            go_left = x[active, self.feature[current]] <= self.threshold[current]
            node[active] = np.where(go_left, self.left[current], self.right[current])
            active = active[self.feature[node[active]] != LEAF]
        return node

    def predict_value(self, x: Matrix) -> np.ndarray:
        """Leaf value reached by every row of ``x``."""
        return self.value[self.apply(x)]

    def to_nodes(self) -> List[Dict[str, Any]]:
        """Flat node list for JSON persistence."""
        nodes = []
        for node in map(self.node, range(self.n_nodes)):
            if node.is_leaf:
                nodes.append({"leaf_value": node.value})
            else:
                nodes.append(
                    {
                        "feature": node.feature,
                        "threshold": node.threshold,
                        "left_index": node.left,
                        "right_index": node.right,
                    }
                )
        return nodes

    @classmethod
    def from_nodes(cls, nodes: List[Dict[str, Any]], n_features: int) -> "Tree":
        """
        Rebuild a tree from :meth:`to_nodes` output.

        :raises ModelFormatError: If a node is malformed or links are invalid.
        """
        if not isinstance(nodes, list) or not nodes:
            raise ModelFormatError("a tree needs a nonempty node list")
        n = len(nodes)
        feature = np.full(n, LEAF, dtype=np.intp)
        threshold = np.zeros(n)
        left = np.full(n, LEAF, dtype=np.intp)
        right = np.full(n, LEAF, dtype=np.intp)
        value = np.zeros(n)
        try:
            for i, node in enumerate(nodes):
                if "leaf_value" in node:
                    value[i] = float(node["leaf_value"])
                    continue
                feature[i] = int(node["feature"])
                threshold[i] = float(node["threshold"])
                left[i] = int(node["left_index"])
                right[i] = int(node["right_index"])
                if not 0 <= feature[i] < n_features:
                    raise ModelFormatError(
                        f"node {i}: feature {feature[i]} out of range"
                    )
                if not (i < left[i] < n and i < right[i] < n):
                    raise ModelFormatError(f"node {i}: child index out of range")
        except ModelFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelFormatError(f"malformed tree node: {exc}") from exc
        if not (np.all(np.isfinite(threshold)) and np.all(np.isfinite(value))):
            raise ModelFormatError("tree values must be finite")
        return cls(feature, threshold, left, right, value)


class _NodeBuffer:
    def __init__(self):
        self.feature: List[int] = []
        self.threshold: List[float] = []
        self.left: List[int] = []
        self.right: List[int] = []
        self.value: List[float] = []
        self.n_samples: List[int] = []

    def add(self, value: float, n_samples: int) -> int:
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.value.append(value)
        self.n_samples.append(n_samples)
        return len(self.feature) - 1

    def set_split(
        self, node: int, feature: int, threshold: float, left: int, right: int
    ):
        self.feature[node] = feature
        self.threshold[node] = threshold
        self.left[node] = left
        self.right[node] = right

    def build(self) -> Tree:
        return Tree(
            self.feature,
            self.threshold,
            self.left,
            self.right,
            self.value,
            self.n_samples,
        )


def _partition(order: np.ndarray, go_left: np.ndarray):
    """Stable split of a per-column sorted index matrix into its two children."""
    mask = go_left[order]
    n_left = int(mask[:, 0].sum())
    width = order.shape[1]
    left = order.T[mask.T].reshape(width, n_left).T
    right = order.T[~mask.T].reshape(width, order.shape[0] - n_left).T
    return left, right


@dataclass(frozen=True)
class TreeParams(Params):
    """
    Growth controls for a classification tree.

    :param max_depth: Depth bound; None grows until another rule stops it.
    :param min_samples_leaf: Minimum training rows in every leaf.
    :param min_samples_split: Minimum rows for a node to be split.
    :param features_per_split: Candidate features drawn per node; None = all.
    :param seed: Seed used when the tree is trained on its own.
    """

    max_depth: Optional[int] = None
    min_samples_leaf: int = 1
    min_samples_split: int = 2
    features_per_split: Optional[int] = None
    seed: int = 42

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise InvalidArgumentError(f"max_depth must be >= 0, got {self.max_depth}")
        if self.min_samples_leaf < 1:
            raise InvalidArgumentError(
                f"min_samples_leaf must be >= 1, got {self.min_samples_leaf}"
            )
        if self.min_samples_split < 2:
            raise InvalidArgumentError(
                f"min_samples_split must be >= 2, got {self.min_samples_split}"
            )
        if self.features_per_split is not None and self.features_per_split < 1:
            raise InvalidArgumentError(
                f"features_per_split must be >= 1, got {self.features_per_split}"
            )


def _grow_classification_tree(
    x: np.ndarray, y: np.ndarray, params: TreeParams, n_candidates: int, rng: SeededRng
) -> Tree:
    n, d = x.shape
    order = np.argsort(x, axis=0, kind="stable")
    go_left = np.zeros(n, dtype=bool)
    nodes = _NodeBuffer()
    stack = [(nodes.add(float(y.mean()), n), order, 0)]
    while stack:
        node, node_order, depth = stack.pop()
        rows = node_order[:, 0]
        m = rows.size
        n_ones = int(y[rows].sum())
        if (
            (params.max_depth is not None and depth >= params.max_depth)
            or m < params.min_samples_split
            or n_ones == 0
            or n_ones == m
        ):
            continue
        if n_candidates < d:
            features = np.sort(rng.sample(d, n_candidates))
        else:
            features = np.arange(d)
        positions = node_order[:, features]
        split = _gini_split(
            x[positions, features],
            y[positions],
            features,
            n_ones,
            params.min_samples_leaf,
        )
        if split is None:
            continue
        go_left[rows] = x[rows, split.feature] <= split.threshold
        left_order, right_order = _partition(node_order, go_left)
        left = nodes.add(float(y[left_order[:, 0]].mean()), left_order.shape[0])
        right = nodes.add(float(y[right_order[:, 0]].mean()), right_order.shape[0])
        nodes.set_split(node, split.feature, split.threshold, left, right)
        stack.append((right, right_order, depth + 1))
        stack.append((left, left_order, depth + 1))
    return nodes.build()


def fit_tree(train: Dataset, rows, params: TreeParams, rng: SeededRng) -> Tree:
    """
    Grow a CART classification tree on ``rows`` of ``train``.

    Rows may repeat (bootstrap resamples). At every node that may still be
    split, ``features_per_split`` candidate features are drawn from ``rng``
    without replacement.

    :raises InvalidArgumentError: If ``rows`` is empty or
        ``features_per_split`` exceeds the feature count.
    """
    rows = np.asarray(rows, dtype=np.intp)
    if rows.size == 0:
        raise InvalidArgumentError("cannot grow a tree on zero rows")
    d = train.n_features
    n_candidates = d if params.features_per_split is None else params.features_per_split
    if n_candidates > d:
        raise InvalidArgumentError(
            f"features_per_split must be in [1, {d}], got {n_candidates}"
        )
    return _grow_classification_tree(
        train.x[rows], train.y[rows], params, n_candidates, rng
    )


def grow_newton_tree(
    x: np.ndarray,
    grad: np.ndarray,
    hess: np.ndarray,
    columns: np.ndarray,
    max_depth: int,
    reg_lambda: float,
    gamma: float,
) -> Tree:
    """
    Grow a boosting tree on gradient statistics.

    :param x: Sampled rows restricted to the sampled columns.
    :param grad: First derivatives, one per row of ``x``.
    :param hess: Second derivatives, one per row of ``x``.
    :param columns: Global feature index of each column of ``x``, ascending.
    """
    n, k = x.shape
    columns = np.asarray(columns, dtype=np.intp)
    local = np.arange(k)
    order = np.argsort(x, axis=0, kind="stable")
    go_left = np.zeros(n, dtype=bool)
    nodes = _NodeBuffer()

    def leaf_weight(g_sum: float, h_sum: float) -> float:
        denominator = h_sum + reg_lambda
        return -g_sum / denominator if denominator > 0 else 0.0

    g_root, h_root = float(grad.sum()), float(hess.sum())
    stack = [(nodes.add(leaf_weight(g_root, h_root), n), order, 0, g_root, h_root)]
    while stack:
        node, node_order, depth, g_sum, h_sum = stack.pop()
        if depth >= max_depth or node_order.shape[0] < 2:
            continue
        split = _newton_split(
            x[node_order, local],
            grad[node_order],
            hess[node_order],
            local,
            g_sum,
            h_sum,
            reg_lambda,
            gamma,
        )
        if split is None:
            continue
        rows = node_order[:, 0]
        go_left[rows] = x[rows, split.feature] <= split.threshold
        left_order, right_order = _partition(node_order, go_left)
        sums = []
        for child in (left_order, right_order):
            child_rows = child[:, 0]
            sums.append((float(grad[child_rows].sum()), float(hess[child_rows].sum())))
        left = nodes.add(leaf_weight(*sums[0]), left_order.shape[0])
        right = nodes.add(leaf_weight(*sums[1]), right_order.shape[0])
        nodes.set_split(node, int(columns[split.feature]), split.threshold, left, right)
        stack.append((right, right_order, depth + 1, *sums[1]))
        stack.append((left, left_order, depth + 1, *sums[0]))
    return nodes.build()


class DecisionTree(Classifier):
    """A single CART tree; scores are leaf class-1 fractions."""

    kind = "decision_tree"

    def __init__(self, params: Optional[TreeParams] = None):
        super().__init__(params or TreeParams())
        self.tree_: Optional[Tree] = None

    def _fit(self, train: Dataset) -> None:
        rng = rng_from_seed(self.params.seed).split("tree/0")
        self.tree_ = fit_tree(train, np.arange(train.n_samples), self.params, rng)

    def _score(self, x: Matrix) -> np.ndarray:
        return self.tree_.predict_value(x)

    def get_state(self) -> Dict[str, Any]:
        return {"n_features": self.n_features_, "tree": self.tree_.to_nodes()}

    @classmethod
    def from_state(cls, params: TreeParams, state: Dict[str, Any]) -> "DecisionTree":
        model = cls(params)
        model.n_features_ = int(state["n_features"])
        model.tree_ = Tree.from_nodes(state["tree"], model.n_features_)
        return model
