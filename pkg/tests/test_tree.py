"""
Tests for CART trees - Gini arithmetic, split search against brute force,
growth controls and flat node storage
"""

import numpy as np
import pytest

from model_switching.dataset import Dataset, DatasetSpec, generate, train_val_split
from model_switching.errors import InvalidArgumentError, ModelFormatError
from model_switching.metrics import evaluate
from model_switching.rng import rng_from_seed
from model_switching.tree import (
    DecisionTree,
    Tree,
    TreeParams,
    best_split,
    fit_tree,
    gini_impurity,
    split_impurity_decrease,
    split_threshold,
)


def brute_force_split(x, y, rows, features, min_samples_leaf):
    """Enumerate every (feature, midpoint) pair; first strict maximum wins"""
    best = None
    for f in sorted(set(features)):
        values = sorted(set(x[rows, f].tolist()))
        for lower, upper in zip(values, values[1:]):
            threshold = split_threshold(lower, upper)
            left = [r for r in rows if x[r, f] <= threshold]
            right = [r for r in rows if x[r, f] > threshold]
            if len(left) < min_samples_leaf or len(right) < min_samples_leaf:
                continue
            left_counts = (
                sum(1 for r in left if y[r] == 0),
                sum(1 for r in left if y[r] == 1),
            )
            right_counts = (
                sum(1 for r in right if y[r] == 0),
                sum(1 for r in right if y[r] == 1),
            )
            decrease = split_impurity_decrease(left_counts, right_counts)
            if decrease > 0 and (best is None or decrease > best[2]):
                best = (f, threshold, decrease)
    return best


def test_gini_examples():
    """Test pure, balanced and 3:1 nodes"""
    assert gini_impurity((4, 0)) == 0.0
    assert gini_impurity((2, 2)) == 0.5
    assert gini_impurity((3, 1)) == 0.375


def test_gini_rejects_empty_node():
    """Test zero total and negative counts are rejected"""
    with pytest.raises(InvalidArgumentError):
        gini_impurity((0, 0))
    with pytest.raises(InvalidArgumentError):
        gini_impurity((-1, 2))


def test_split_threshold_midpoint():
    """Test thresholds sit at midpoints, falling back to the lower value"""
    assert split_threshold(2.0, 3.0) == 2.5
    lower = 1.0
    upper = np.nextafter(1.0, 2.0)
    assert split_threshold(lower, upper) == lower


def test_best_split_simple_example():
    """Test [1,2,3,4] with labels [0,0,1,1] splits at 2.5 with decrease 0.5"""
    x = np.array([[1.0], [2.0], [3.0], [4.0]])
    y = np.array([0, 0, 1, 1])
    split = best_split(x, y, range(4), [0])
    assert split.feature == 0
    assert split.threshold == 2.5
    assert split.improvement == 0.5


def test_best_split_pure_node():
    """Test a pure node has no split"""
    x = np.array([[1.0], [2.0], [3.0]])
    y = np.array([1, 1, 1])
    assert best_split(x, y, range(3), [0]) is None


def test_best_split_needs_rows():
    """Test an empty row set is rejected"""
    with pytest.raises(InvalidArgumentError):
        best_split(np.zeros((2, 1)), np.array([0, 1]), [], [0])


def test_best_split_tie_prefers_lowest_feature():
    """Test identical columns resolve to the lowest feature index"""
    column = np.array([1.0, 2.0, 3.0, 4.0])
    x = np.column_stack([column, column, column])
    y = np.array([0, 0, 1, 1])
    assert best_split(x, y, range(4), [2, 1]).feature == 1


def test_best_split_agrees_with_brute_force():
    """Test vectorized search equals exhaustive enumeration on 200 random instances"""
    gen = np.random.default_rng(2024)
    mismatches = 0
    for instance in range(200):
        n_rows = int(gen.integers(1, 51))
        if instance % 2 == 0:
            # coarse integer grid to force ties between thresholds and features
            x = gen.integers(0, 5, size=(n_rows, 3)).astype(float)
        else:
            x = gen.normal(size=(n_rows, 3))
        y = gen.integers(0, 2, size=n_rows)
        rows = list(range(n_rows))
        n_features = int(gen.integers(1, 4))
        features = sorted(gen.choice(3, size=n_features, replace=False).tolist())
        min_samples_leaf = int(gen.integers(1, 4))

        expected = brute_force_split(x, y, rows, features, min_samples_leaf)
        got = best_split(x, y, rows, features, min_samples_leaf)
        if expected is None:
            mismatches += got is not None
        else:
            mismatches += got is None or tuple(got) != expected
    assert mismatches == 0


def test_best_split_on_row_subset():
    """Test only the given rows are considered"""
    x = np.array([[0.0], [1.0], [2.0], [3.0], [4.0], [5.0]])
    y = np.array([1, 1, 0, 0, 1, 1])
    split = best_split(x, y, [0, 1, 2, 3], [0])
    assert split.threshold == 1.5


def test_unbounded_tree_shatters_training_data(small_data):
    """Test an unbounded tree reproduces its training labels exactly"""
    model = DecisionTree().fit(small_data)
    assert np.array_equal(model.predict(small_data.x), small_data.y)


def test_depth_zero_tree_predicts_majority():
    """Test max_depth=0 gives one leaf predicting the majority class"""
    data = Dataset(np.array([[0.0], [1.0], [2.0], [3.0]]), np.array([1, 1, 1, 0]))
    model = DecisionTree(TreeParams(max_depth=0)).fit(data)
    assert model.tree_.n_nodes == 1
    assert model.tree_.depth == 0
    assert model.predict(data.x).tolist() == [1, 1, 1, 1]
    assert model.predict_score(data.x).tolist() == [0.75] * 4


def test_growth_controls_respected(small_data):
    """Test depth bound and minimum leaf size hold for every leaf"""
    params = TreeParams(max_depth=4, min_samples_leaf=7, features_per_split=3)
    rows = np.arange(small_data.n_samples)
    tree = fit_tree(small_data, rows, params, rng_from_seed(1))
    assert tree.depth <= 4
    assert np.all(tree.n_samples[tree.leaves] >= 7)
    # every training row lands in a leaf of the recorded size
    counts = np.bincount(tree.apply(small_data.x), minlength=tree.n_nodes)
    assert np.array_equal(counts[tree.leaves], tree.n_samples[tree.leaves])


def test_min_samples_split_stops_growth(small_data):
    """Test nodes smaller than min_samples_split become leaves"""
    params = TreeParams(min_samples_split=100)
    rows = np.arange(small_data.n_samples)
    tree = fit_tree(small_data, rows, params, rng_from_seed(1))
    internal = ~tree.is_leaf
    assert np.all(tree.n_samples[internal] >= 100)


def test_leaf_values_are_class_fractions(small_data):
    """Test each leaf stores the fraction of class-1 rows reaching it"""
    params = TreeParams(max_depth=3)
    rows = np.arange(small_data.n_samples)
    tree = fit_tree(small_data, rows, params, rng_from_seed(1))
    leaf_of_row = tree.apply(small_data.x)
    for leaf in tree.leaves:
        fraction = small_data.y[leaf_of_row == leaf].mean()
        assert tree.value[leaf] == pytest.approx(fraction)


def test_same_seed_same_tree(small_data):
    """Test feature draws make trees seed-deterministic"""
    params = TreeParams(features_per_split=2)
    rows = np.arange(small_data.n_samples)
    a = fit_tree(small_data, rows, params, rng_from_seed(9))
    b = fit_tree(small_data, rows, params, rng_from_seed(9))
    assert np.array_equal(a.feature, b.feature)
    assert np.array_equal(a.threshold, b.threshold)
    assert np.array_equal(a.value, b.value)


def test_features_per_split_bounds(small_data):
    """Test more candidates than features is rejected"""
    with pytest.raises(InvalidArgumentError):
        fit_tree(small_data, [0, 1], TreeParams(features_per_split=7), rng_from_seed(1))
    with pytest.raises(InvalidArgumentError):
        TreeParams(features_per_split=0)


def test_routing_goes_left_on_equal():
    """Test rows equal to the threshold go left"""
    tree = Tree(
        feature=[0, -1, -1],
        threshold=[1.0, 0.0, 0.0],
        left=[1, -1, -1],
        right=[2, -1, -1],
        value=[0.5, 0.0, 1.0],
    )
    x = np.array([[0.5], [1.0], [1.5]])
    assert tree.apply(x).tolist() == [1, 1, 2]
    assert tree.predict_value(x).tolist() == [0.0, 0.0, 1.0]
    assert tree.node(0).left == 1 and tree.node(1).is_leaf


def test_node_list_round_trip(small_data):
    """Test flat node lists rebuild a tree with identical routing"""
    model = DecisionTree(TreeParams(max_depth=5)).fit(small_data)
    nodes = model.tree_.to_nodes()
    rebuilt = Tree.from_nodes(nodes, small_data.n_features)
    assert np.array_equal(
        rebuilt.predict_value(small_data.x), model.tree_.predict_value(small_data.x)
    )
    assert set(nodes[0]) == {"feature", "threshold", "left_index", "right_index"}
    for i in range(model.tree_.n_nodes):
        before, after = model.tree_.node(i), rebuilt.node(i)
        assert before.is_leaf == after.is_leaf
        if before.is_leaf:
            assert after.value == before.value
        else:
            assert (after.feature, after.threshold, after.left, after.right) == (
                before.feature,
                before.threshold,
                before.left,
                before.right,
            )


def test_node_list_validation():
    """Test malformed node lists are rejected"""
    with pytest.raises(ModelFormatError):
        Tree.from_nodes([], 2)
    with pytest.raises(ModelFormatError):
        self_loop = {"feature": 0, "threshold": 0.0, "left_index": 0, "right_index": 1}
        Tree.from_nodes([self_loop], 2)
    with pytest.raises(ModelFormatError):
        Tree.from_nodes(
            [
                {"feature": 5, "threshold": 0.0, "left_index": 1, "right_index": 2},
                {"leaf_value": 0.0},
                {"leaf_value": 1.0},
            ],
            2,
        )
    with pytest.raises(ModelFormatError):
        Tree.from_nodes([{"threshold": 1.0}], 2)


def test_scaling_a_column_keeps_predictions(small_data):
    """Test refitting on a positively scaled column gives the same predictions"""
    scaled_x = small_data.x.copy()
    scaled_x[:, 0] *= 4.0
    scaled = Dataset(scaled_x, small_data.y)
    params = TreeParams(max_depth=6, features_per_split=3)
    a = DecisionTree(params).fit(small_data)
    b = DecisionTree(params).fit(scaled)
    probe = np.random.default_rng(0).normal(size=(300, small_data.n_features))
    probe_scaled = probe.copy()
    probe_scaled[:, 0] *= 4.0
    assert np.array_equal(a.predict(probe), b.predict(probe_scaled))


def test_well_separated_classes_depth_limited():
    """Test class_sep=8 lets a depth-limited tree reach 99% on held-out rows"""
    spec = DatasetSpec(
        n_samples=2000, n_features=20, n_informative=10, class_sep=8.0, seed=42
    )
    data = generate(spec)
    train, val = train_val_split(data, 0.2, rng_from_seed(42).split("split"))
    model = DecisionTree(TreeParams(max_depth=3)).fit(train)
    assert evaluate(model, val).accuracy >= 0.99


def test_predict_matches_thresholded_score(small_split):
    """Test predict equals score >= 0.5 for a single tree"""
    train, val = small_split
    model = DecisionTree(TreeParams(max_depth=4)).fit(train)
    thresholded = (model.predict_score(val.x) >= 0.5).astype(int)
    assert np.array_equal(model.predict(val.x), thresholded)


def test_width_mismatch(small_split):
    """Test prediction rejects the wrong number of columns"""
    train, _ = small_split
    model = DecisionTree(TreeParams(max_depth=2)).fit(train)
    with pytest.raises(InvalidArgumentError, match="expected 6 columns, got 5"):
        model.predict(np.zeros((3, 5)))
