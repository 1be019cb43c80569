"""Tree growth and the split search, checked against brute enumeration."""

import numpy as np
import pytest

from respmon.errors import EmptyNode
from respmon.models.tree import GINI_TIE_EPS, DecisionTree, best_split, gini, grow_tree


def brute_best_split(X, y, features, n_classes):
    """Independent reference: try every midpoint, recount both sides."""
    best = None
    for f in sorted(features):
        vals = np.unique(X[:, f])
        for lo, hi in zip(vals[:-1], vals[1:]):
            thr = (float(lo) + float(hi)) / 2.0
            left = y[X[:, f] <= thr]
            right = y[X[:, f] > thr]
            w = (
                left.size * gini(np.bincount(left, minlength=n_classes))
                + right.size * gini(np.bincount(right, minlength=n_classes))
            ) / y.size
            if best is None or w < best[2] - GINI_TIE_EPS:
                best = (f, thr, w)
    if best is None:
        return None
    parent = gini(np.bincount(y, minlength=n_classes))
    if best[2] >= parent - GINI_TIE_EPS:
        return None
    return best


def test_gini_hand_values():
    assert gini([4, 0, 0]) == 0.0
    assert gini([2, 2]) == 0.5
    assert gini([2, 1, 1]) == 0.625
    with pytest.raises(EmptyNode):
        gini([0, 0])


def test_split_separates_two_halves():
    X = np.array([[1.0], [2.0], [3.0], [4.0]])
    c = best_split(X, np.array([0, 0, 1, 1]), [0])
    assert c.feature_index == 0
    assert c.threshold == 2.5
    assert c.weighted_gini == 0.0


def test_split_none_when_pure():
    assert best_split(np.array([[1.0], [2.0]]), np.array([1, 1]), [0]) is None


def test_split_none_on_identical_rows():
    X = np.ones((6, 2))
    y = np.array([0, 1, 0, 1, 0, 1])
    assert best_split(X, y, [0, 1]) is None


def test_split_tie_prefers_lower_feature():
    X = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0], [4.0, 4.0]])
    y = np.array([0, 0, 1, 1])
    assert best_split(X, y, [0, 1]).feature_index == 0
    assert best_split(X, y, [1, 0]).feature_index == 0  # subset order is irrelevant


def test_split_tie_prefers_lower_threshold():
    # both cuts of the symmetric pattern score the same weighted gini
    X = np.array([[1.0], [2.0], [3.0], [4.0]])
    y = np.array([0, 1, 1, 0])
    choices = []
    c = best_split(X, y, [0])
    if c is not None:
        choices.append(c.threshold)
    ref = brute_best_split(X, y, [0], 2)
    assert (c is None) == (ref is None)
    if c is not None:
        assert c.threshold == ref[1]


def test_split_matches_enumeration():
    rng = np.random.default_rng(40)
    checked = 0
    for _ in range(120):
        n = int(rng.integers(2, 21))
        d = int(rng.integers(1, 4))
        n_cls = int(rng.integers(2, 4))
        X = np.round(rng.normal(size=(n, d)) * 2, 1)  # rounding forces ties
        y = rng.integers(0, n_cls, n)
        features = list(range(d))
        ours = best_split(X, y, features, n_classes=n_cls)
        ref = brute_best_split(X, y, features, n_cls)
        if ref is None:
            assert ours is None
            continue
        checked += 1
        assert ours is not None
        assert ours.feature_index == ref[0]
        assert ours.threshold == pytest.approx(ref[1], abs=1e-12)
        assert ours.weighted_gini == pytest.approx(ref[2], abs=1e-9)
    assert checked > 40


def test_split_feature_subset_restricts_search():
    X = np.column_stack([np.array([1.0, 2.0, 3.0, 4.0]), np.array([5.0, 5.0, 5.0, 5.0])])
    y = np.array([0, 0, 1, 1])
    assert best_split(X, y, [1]) is None
    assert best_split(X, y, [0, 1]).feature_index == 0


def test_grow_memorizes_distinct_points():
    rng = np.random.default_rng(41)
    X = rng.normal(size=(20, 3))
    y = rng.integers(0, 2, 20)
    y[0] = 0
    y[1] = 1  # both classes present
    tree = grow_tree(X, y, 2, np.random.default_rng(0))
    assert np.array_equal(tree.predict(X), y)


def test_grow_depth_limit():
    rng = np.random.default_rng(42)
    X = rng.normal(size=(50, 4))
    y = rng.integers(0, 3, 50)
    tree = grow_tree(X, y, 3, np.random.default_rng(0), max_depth=1)
    assert tree.n_nodes <= 3


def test_grow_min_samples_split():
    X = np.array([[1.0], [2.0], [3.0], [4.0]])
    y = np.array([0, 1, 0, 1])
    tree = grow_tree(X, y, 2, np.random.default_rng(0), min_samples_split=5)
    assert tree.n_nodes == 1
    assert tree.counts[0] == [2, 2]


def test_grow_deterministic_with_subsets():
    rng = np.random.default_rng(43)
    X = rng.normal(size=(80, 6))
    y = rng.integers(0, 3, 80)
    a = grow_tree(X, y, 3, np.random.default_rng(9), features_per_split=2)
    b = grow_tree(X, y, 3, np.random.default_rng(9), features_per_split=2)
    assert a.feature == b.feature
    assert a.threshold == b.threshold
    assert a.left == b.left and a.right == b.right
    assert a.counts == b.counts


def test_leaf_label_breaks_ties_low():
    tree = DecisionTree(3)
    node = tree._add_node()
    tree._seal_leaf(node, np.array([2, 2, 1]))
    assert tree.label[node] == 0
    assert tree.predict_one([0.0]) == 0


def test_weighted_rows_match_duplicated_rows():
    # integer sample weights must reproduce the duplicated-row tree exactly
    for case in range(30):
        rng = np.random.default_rng(5000 + case)
        n = int(rng.integers(3, 60))
        d = int(rng.integers(1, 6))
        X = np.round(rng.normal(size=(n, d)), 2)
        y = rng.integers(0, 3, n)
        rows = rng.integers(0, n, size=n)
        uniq, reps = np.unique(rows, return_counts=True)
        k = int(rng.integers(1, d + 1))
        md = None if case % 2 == 0 else 4
        a = grow_tree(X[rows], y[rows], 3, np.random.default_rng(case),
                      max_depth=md, features_per_split=k)
        b = grow_tree(X[uniq], y[uniq], 3, np.random.default_rng(case),
                      max_depth=md, features_per_split=k,
                      sample_weight=reps.astype(np.float64))
        assert a.feature == b.feature
        assert a.threshold == b.threshold
        assert a.left == b.left and a.right == b.right
        assert a.counts == b.counts
        assert a.label == b.label
