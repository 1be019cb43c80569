"""Multinomial logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from ..errors import NonFiniteLoss
from ..validation import as_float_matrix, as_label_vector, check_n_features, require_multiclass


def softmax(z) -> np.ndarray:
    """Row-wise softmax with max subtraction for numerical stability."""
    z = np.asarray(z, dtype=np.float64)
    squeeze = z.ndim == 1
    if squeeze:
        z = z.reshape(1, -1)
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    p = e / e.sum(axis=1, keepdims=True)
    return p[0] if squeeze else p


def loss_and_gradient(weights, X_bias, y, l2_lambda: float):
    """Mean cross-entropy plus an L2 term on the non-bias columns.

    weights has shape (n_classes, d+1) with the bias in the last column;
    X_bias is the design matrix with a trailing column of ones. Returns
    (loss, gradient) where the gradient matches weights in shape.
    """
    W = np.asarray(weights, dtype=np.float64)
    Xb = np.asarray(X_bias, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n = Xb.shape[0]
    idx = np.arange(n)
    logits = Xb @ W.T
    logits -= logits.max(axis=1)[:, None]
    true_shift = logits[idx, y]
    e = np.exp(logits)
    sums = e.sum(axis=1)
    data_loss = float(np.mean(np.log(sums) - true_shift))
    penalty = 0.5 * l2_lambda * float(np.sum(W[:, :-1] ** 2))

    probs = e / sums[:, None]
    probs[idx, y] -= 1.0
    grad = probs.T @ Xb / n
    grad[:, :-1] += l2_lambda * W[:, :-1]
    return data_loss + penalty, grad


class _GdWorkspace:
    """Transposed-layout buffers for the gradient-descent inner loop.

    Keeps the class-by-sample activation matrix row-contiguous so the
    per-iteration reductions and both matmuls run over contiguous memory.
    Produces the same loss and gradient as loss_and_gradient.
    """

    def __init__(self, Xb: np.ndarray, y: np.ndarray, n_classes: int):
        n = Xb.shape[0]
        self.n = n
        self.inv_n = 1.0 / n
        self.Xb = Xb
        self.Xt = np.ascontiguousarray(Xb.T)
        self.act = np.empty((n_classes, n), dtype=np.float64)
        self.flat = self.act.reshape(-1)
        self.true_flat = np.asarray(y, dtype=np.int64) * n + np.arange(n)
        self.mx = np.empty(n, dtype=np.float64)
        self.sums = np.empty(n, dtype=np.float64)
        self.shift = np.empty(n, dtype=np.float64)
        self.grad = np.empty((n_classes, Xb.shape[1]), dtype=np.float64)

    def step(self, W: np.ndarray, l2_lambda: float) -> float:
        act = self.act
        np.matmul(W, self.Xt, out=act)
        act.max(axis=0, out=self.mx)
        act -= self.mx[None, :]
        np.take(self.flat, self.true_flat, out=self.shift)
        true_shift = float(self.shift.sum())
        np.exp(act, out=act)
        act.sum(axis=0, out=self.sums)
        np.log(self.sums, out=self.mx)  # mx now holds log-normalizers
        data_loss = (float(self.mx.sum()) - true_shift) * self.inv_n
        Wnb = W[:, :-1]
        penalty = 0.5 * l2_lambda * float(np.einsum("ij,ij->", Wnb, Wnb))

        # scale by 1/n here so the gradient matmul needs no second pass
        self.sums *= self.n
        act /= self.sums[None, :]
        self.flat[self.true_flat] -= self.inv_n
        np.matmul(act, self.Xb, out=self.grad)
        self.grad[:, :-1] += l2_lambda * Wnb
        return data_loss + penalty


class SoftmaxRegression(BaseEstimator, ClassifierMixin):
    """Linear classifier with softmax outputs and L2-penalized weights.

    Weights start at zero and follow full-batch gradient descent until the
    loss change drops below loss_tol or max_iters is reached. The bias column
    is excluded from the penalty. A non-finite loss aborts with NonFiniteLoss.
    """

    def __init__(
        self,
        learning_rate: float = 0.1,
        l2_lambda: float = 1e-4,
        max_iters: int = 1000,
        loss_tol: float = 1e-6,
    ):
        self.learning_rate = learning_rate
        self.l2_lambda = l2_lambda
        self.max_iters = max_iters
        self.loss_tol = loss_tol

    def fit(self, X, y):
        X = as_float_matrix(X)
        y = as_label_vector(y, X.shape[0])
        self.n_classes_ = require_multiclass(y)
        self.classes_ = np.arange(self.n_classes_)
        self.n_features_in_ = X.shape[1]

        Xb = np.hstack([X, np.ones((X.shape[0], 1))])
        W = np.zeros((self.n_classes_, X.shape[1] + 1), dtype=np.float64)
        work = _GdWorkspace(Xb, y, self.n_classes_)
        prev = np.inf
        loss = np.inf
        self.converged_ = False
        iters = 0
        for iters in range(1, int(self.max_iters) + 1):
            loss = work.step(W, self.l2_lambda)
            if not np.isfinite(loss):
                raise NonFiniteLoss(f"loss became {loss} at iteration {iters}")
            W -= self.learning_rate * work.grad
            if abs(prev - loss) < self.loss_tol:
                self.converged_ = True
                break
            prev = loss
        self.weights_ = W
        self.final_loss_ = float(loss)
        self.n_iter_ = iters
        return self

    def _check_ready(self, X):
        if not hasattr(self, "weights_"):
            raise NotFittedError("SoftmaxRegression.fit must run before prediction")
        X = as_float_matrix(X, allow_empty=True)
        check_n_features(self.n_features_in_, X)
        return X

    def predict_proba(self, X):
        X = self._check_ready(X)
        Xb = np.hstack([X, np.ones((X.shape[0], 1))])
        return softmax(Xb @ self.weights_.T)

    def predict(self, X):
        return np.argmax(self.predict_proba(X), axis=1)
