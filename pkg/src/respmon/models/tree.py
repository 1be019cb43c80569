"""Gini-impurity decision tree grown on axis-aligned threshold splits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyNode

# Impurity differences at or below this are treated as exact ties; ties fall
# to the lower feature index, then the lower threshold.
GINI_TIE_EPS = 1e-12


def gini(class_counts) -> float:
    """Gini impurity 1 - sum(p_c^2) of a count vector."""
    counts = np.asarray(class_counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise EmptyNode("gini of an empty count vector")
    p = counts / total
    return float(1.0 - np.sum(p * p))


@dataclass(frozen=True)
class SplitChoice:
    feature_index: int
    threshold: float
    weighted_gini: float


def _scan_columns(sub, y, parent_counts, weights=None):
    """Best cut per column of an already-sliced feature block.

    Minimizing the size-weighted child Gini equals maximizing
    s = sum_c left_c^2 / n_left + sum_c right_c^2 / n_right, so the scan works
    on s and converts back at the end. Returns (col, threshold, weighted_gini)
    or None. Ties within GINI_TIE_EPS (on the weighted-Gini scale) resolve to
    the lower column, then the lower threshold.

    With integer weights the result is exactly what duplicating each row
    weight-many times would give: counts, sizes, and hence scores agree bit
    for bit, and runs of equal feature values are masked either way.
    """
    m, s = sub.shape
    if m < 2:
        return None
    cols = np.arange(s)
    order = np.argsort(sub, axis=0)
    xs = sub[order, cols[None, :]]
    ys = y[order]

    onehot = ys[:, :, None] == np.arange(parent_counts.size)[None, None, :]
    parent = parent_counts.astype(np.float64)
    total = float(parent.sum())
    if weights is None:
        prefix = np.cumsum(onehot, axis=0, dtype=np.float64)
        n_left = np.arange(1, m, dtype=np.float64)[:, None]
    else:
        ws = weights[order]
        prefix = np.cumsum(onehot * ws[:, :, None], axis=0)
        n_left = np.cumsum(ws, axis=0)[:-1]
    left = prefix[:-1]  # cut after sorted row i -> rows 0..i on the left

    score = np.einsum("ijk,ijk->ij", left, left)
    cross = np.einsum("ijk,k->ij", left, parent)
    # score := sl2/nl + (P2 - 2*cross + sl2)/nr
    cross *= -2.0
    cross += score
    cross += float(parent @ parent)
    cross /= total - n_left
    score /= n_left
    score += cross
    score[xs[1:] <= xs[:-1]] = -np.inf  # cuts inside runs of equal values

    col_best = score.max(axis=0)
    first = (score >= col_best[None, :] - GINI_TIE_EPS * total).argmax(axis=0)

    best = None
    for col in range(s):
        if not np.isfinite(col_best[col]):
            continue
        i = int(first[col])
        g = 1.0 - float(score[i, col]) / total
        if best is None or g < best[2] - GINI_TIE_EPS:
            thr = float(xs[i, col] + xs[i + 1, col]) / 2.0
            best = (col, thr, g)
    return best


def best_split(X, y, feature_subset, n_classes: int | None = None) -> SplitChoice | None:
    """Exhaustive threshold search over the given features.

    Candidate thresholds are midpoints between consecutive distinct sorted
    values of each feature. Returns the split minimizing the size-weighted
    child Gini impurity, or None when no candidate improves on the parent.
    Ties break to the lower feature index, then the lower threshold.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    m = X.shape[0]
    features = np.sort(np.asarray(feature_subset, dtype=np.intp))
    if m < 2 or features.size == 0:
        return None
    n_cls = int(n_classes) if n_classes is not None else int(y.max()) + 1
    parent_counts = np.bincount(y, minlength=n_cls)

    found = _scan_columns(X[:, features], y, parent_counts)
    if found is None:
        return None
    col, thr, weighted = found
    if weighted >= gini(parent_counts) - GINI_TIE_EPS:
        return None
    return SplitChoice(int(features[col]), thr, weighted)


class DecisionTree:
    """Flat-array binary tree. Internal nodes test x[feature] <= threshold."""

    __slots__ = ("feature", "threshold", "left", "right", "counts", "label", "n_classes")

    def __init__(self, n_classes: int):
        self.n_classes = int(n_classes)
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.counts: list[list[int] | None] = []
        self.label: list[int] = []

    def _add_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.counts.append(None)
        self.label.append(-1)
        return len(self.feature) - 1

    def _seal_leaf(self, node: int, counts: np.ndarray) -> None:
        self.counts[node] = [int(c) for c in counts]
        self.label[node] = int(np.argmax(counts))  # argmax ties to lowest class

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def predict_one(self, x) -> int:
        node = 0
        feature = self.feature
        while feature[node] >= 0:
            node = self.left[node] if x[feature[node]] <= self.threshold[node] else self.right[node]
        return self.label[node]

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        n = X.shape[0]
        out = np.empty(n, dtype=np.int64)
        feature, threshold = self.feature, self.threshold
        left, right, label = self.left, self.right, self.label
        for i in range(n):
            row = X[i]
            node = 0
            while feature[node] >= 0:
                node = left[node] if row[feature[node]] <= threshold[node] else right[node]
            out[i] = label[node]
        return out


def grow_tree(
    X,
    y,
    n_classes: int,
    rng: np.random.Generator,
    max_depth: int | None = None,
    min_samples_split: int = 2,
    features_per_split: int | None = None,
    sample_weight=None,
) -> DecisionTree:
    """Depth-first CART growth; each node samples its own feature subset.

    With features_per_split=None every feature is eligible at every node.
    Nodes stop splitting when pure, smaller than min_samples_split, at
    max_depth, or when no candidate split reduces impurity. Integer sample
    weights stand in for duplicated rows and grow the identical tree.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    w = None if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
    d = X.shape[1]
    k = d if features_per_split is None else min(int(features_per_split), d)
    all_features = np.arange(d, dtype=np.intp)

    tree = DecisionTree(n_classes)
    root = tree._add_node()
    # Stack of (node_id, row_indices, depth); left child pushed last so the
    # traversal (and hence rng consumption) is depth-first, left first.
    stack: list[tuple[int, np.ndarray, int]] = [(root, np.arange(X.shape[0]), 0)]
    while stack:
        node, rows, depth = stack.pop()
        y_node = y[rows]
        if w is None:
            w_node = None
            counts = np.bincount(y_node, minlength=n_classes)
            node_size = rows.size
        else:
            w_node = w[rows]
            counts = np.bincount(y_node, weights=w_node, minlength=n_classes)
            node_size = float(counts.sum())
        grown = None
        if (
            node_size >= min_samples_split
            and (max_depth is None or depth < max_depth)
            and np.count_nonzero(counts) > 1
        ):
            if k < d:
                subset = np.sort(rng.permutation(d)[:k]).astype(np.intp)
            else:
                subset = all_features
            found = _scan_columns(X[np.ix_(rows, subset)], y_node, counts, w_node)
            if found is not None:
                col, thr, weighted = found
                parent_gini = 1.0 - sum((float(c) / node_size) ** 2 for c in counts)
                if weighted < parent_gini - GINI_TIE_EPS:
                    grown = (int(subset[col]), thr)
        if grown is None:
            tree._seal_leaf(node, counts)
            continue
        feat, thr = grown
        tree.feature[node] = feat
        tree.threshold[node] = thr
        go_left = X[rows, feat] <= thr
        left_id = tree._add_node()
        right_id = tree._add_node()
        tree.left[node] = left_id
        tree.right[node] = right_id
        stack.append((right_id, rows[~go_left], depth + 1))
        stack.append((left_id, rows[go_left], depth + 1))
    return tree
