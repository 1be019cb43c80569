"""Bootstrap-aggregated forest of Gini decision trees."""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from ..seeding import rng_for
from ..validation import as_float_matrix, as_label_vector, check_n_features, require_multiclass
from .tree import grow_tree


class RandomForest(BaseEstimator, ClassifierMixin):
    """Majority-vote ensemble over trees grown on bootstrap resamples.

    Each tree draws a bootstrap sample of the training rows and considers a
    fresh random feature subset at every node (floor(sqrt(d)) features unless
    overridden). Tree i is seeded by a fixed derivation from random_state, so
    a fitted forest is reproducible regardless of evaluation order. Predicted
    probabilities are vote fractions; ties in predict resolve to the lowest
    class index.
    """

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int | None = None,
        min_samples_split: int = 2,
        features_per_split: int | None = None,
        random_state: int = 0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.features_per_split = features_per_split
        self.random_state = random_state

    def fit(self, X, y):
        X = as_float_matrix(X)
        y = as_label_vector(y, X.shape[0])
        self.n_classes_ = require_multiclass(y)
        self.classes_ = np.arange(self.n_classes_)
        self.n_features_in_ = X.shape[1]
        k = self.features_per_split
        if k is None:
            k = max(1, math.floor(math.sqrt(X.shape[1])))
        n = X.shape[0]
        self.trees_ = []
        for i in range(int(self.n_trees)):
            rng = rng_for(self.random_state, i)
            rows = rng.integers(0, n, size=n)
            # weight-compressed bootstrap: same tree, fewer rows to scan
            uniq, reps = np.unique(rows, return_counts=True)
            self.trees_.append(
                grow_tree(
                    X[uniq],
                    y[uniq],
                    self.n_classes_,
                    rng,
                    max_depth=self.max_depth,
                    min_samples_split=self.min_samples_split,
                    features_per_split=k,
                    sample_weight=reps,
                )
            )
        return self

    def _check_ready(self, X):
        if not hasattr(self, "trees_"):
            raise NotFittedError("RandomForest.fit must run before prediction")
        X = as_float_matrix(X, allow_empty=True)
        check_n_features(self.n_features_in_, X)
        return X

    def predict_proba(self, X):
        X = self._check_ready(X)
        votes = np.zeros((X.shape[0], self.n_classes_), dtype=np.float64)
        if X.shape[0] == 0:
            return votes
        trees = self.trees_
        for i, row in enumerate(X.tolist()):  # plain lists make the walks cheap
            acc = [0.0] * self.n_classes_
            for tree in trees:
                acc[tree.predict_one(row)] += 1.0
            votes[i] = acc
        return votes / len(trees)

    def predict(self, X):
        return np.argmax(self.predict_proba(X), axis=1)
