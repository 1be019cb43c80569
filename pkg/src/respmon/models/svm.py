"""RBF-kernel support vector machines trained with a simplified SMO solver.

The binary solver sweeps the training set looking for multipliers that
violate the KKT conditions beyond a tolerance, pairs each violator with a
random partner, and optimizes the two multipliers jointly in closed form.
Multiclass problems are handled one-vs-rest with the class of the largest
decision value winning (ties to the lowest class index).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from ..errors import DimensionMismatch
from ..seeding import rng_for
from ..validation import as_float_matrix, as_label_vector, check_n_features, require_multiclass

# Multipliers below this are not kept as support vectors.
_SV_FLOOR = 1e-8
# Joint updates smaller than this are treated as no progress.
_MIN_ALPHA_STEP = 1e-5
# Hard cap on full sweeps, so a non-converging run still terminates.
_SWEEP_CAP = 500

GAMMA_VAR_FLOOR = 1e-12


def rbf_kernel(x, z, gamma: float) -> float:
    """exp(-gamma * ||x - z||^2) for two feature vectors."""
    x = np.asarray(x, dtype=np.float64).ravel()
    z = np.asarray(z, dtype=np.float64).ravel()
    if x.shape != z.shape:
        raise DimensionMismatch(f"rbf_kernel got shapes {x.shape} and {z.shape}")
    diff = x - z
    return float(np.exp(-gamma * np.dot(diff, diff)))


def rbf_gram(A, B, gamma: float) -> np.ndarray:
    """Kernel matrix K[i, j] = exp(-gamma * ||A_i - B_j||^2)."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(f"rbf_gram got widths {A.shape[1]} and {B.shape[1]}")
    sq = (
        np.sum(A * A, axis=1)[:, None]
        + np.sum(B * B, axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def resolve_gamma(gamma, X) -> float:
    """Map gamma="scale" to 1 / (d * mean per-feature population variance)."""
    if gamma != "scale":
        g = float(gamma)
        if not g > 0:
            raise DimensionMismatch(f"gamma must be positive, got {gamma}")
        return g
    X = np.asarray(X, dtype=np.float64)
    d = X.shape[1]
    mean_var = float(np.mean(X.var(axis=0)))
    if mean_var < GAMMA_VAR_FLOOR:
        return 1.0 / d
    return 1.0 / (d * mean_var)


@dataclass
class BinarySvm:
    """One trained margin: support vectors, signed multipliers, and bias."""

    sv_x: np.ndarray        # (n_sv, d)
    sv_coef: np.ndarray     # alpha_i * y_i per support vector
    bias: float
    gamma: float
    alphas: np.ndarray      # full multiplier vector, kept for diagnostics
    sweeps: int
    converged: bool

    def decision(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if self.sv_x.shape[0] == 0:
            return np.full(X.shape[0], self.bias)
        return self.sv_coef @ rbf_gram(self.sv_x, X, self.gamma) + self.bias


def smo_train_binary(
    X,
    y_signed,
    c: float,
    gamma: float,
    smo_tol: float,
    max_passes: int,
    rng: np.random.Generator,
) -> BinarySvm:
    """Train one soft-margin RBF machine on +1/-1 labels.

    Follows the simplified sequential-minimal-optimization scheme: scan all
    multipliers, and for each KKT violator pick a random second index, clip
    the pair to the feasible box [0, c], and update the bias from whichever
    multiplier stays strictly inside the box. Training stops after max_passes
    consecutive sweeps without a change, or at a hard sweep cap, in which
    case the best-effort model is returned with converged=False.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y_signed, dtype=np.float64)
    n = X.shape[0]
    K = rbf_gram(X, X, gamma)
    alphas = np.zeros(n)
    b = 0.0
    passes = 0
    sweeps = 0

    while passes < max_passes and sweeps < _SWEEP_CAP:
        changed = 0
        coef = alphas * y
        for i in range(n):
            e_i = float(coef @ K[:, i]) + b - y[i]
            if not ((y[i] * e_i < -smo_tol and alphas[i] < c) or (y[i] * e_i > smo_tol and alphas[i] > 0)):
                continue
            j = int(rng.integers(n - 1))
            if j >= i:
                j += 1
            e_j = float(coef @ K[:, j]) + b - y[j]
            a_i_old, a_j_old = alphas[i], alphas[j]
            if y[i] != y[j]:
                low = max(0.0, a_j_old - a_i_old)
                high = min(c, c + a_j_old - a_i_old)
            else:
                low = max(0.0, a_i_old + a_j_old - c)
                high = min(c, a_i_old + a_j_old)
            if low == high:
                continue
            eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
            if eta >= 0:
                continue
            a_j = a_j_old - y[j] * (e_i - e_j) / eta
            a_j = min(max(a_j, low), high)
            if abs(a_j - a_j_old) < _MIN_ALPHA_STEP:
                continue
            a_i = a_i_old + y[i] * y[j] * (a_j_old - a_j)
            b1 = b - e_i - y[i] * (a_i - a_i_old) * K[i, i] - y[j] * (a_j - a_j_old) * K[i, j]
            b2 = b - e_j - y[i] * (a_i - a_i_old) * K[i, j] - y[j] * (a_j - a_j_old) * K[j, j]
            alphas[i], alphas[j] = a_i, a_j
            coef[i], coef[j] = a_i * y[i], a_j * y[j]
            if 0 < a_i < c:
                b = b1
            elif 0 < a_j < c:
                b = b2
            else:
                b = (b1 + b2) / 2.0
            changed += 1
        sweeps += 1
        passes = passes + 1 if changed == 0 else 0

    keep = alphas > _SV_FLOOR
    return BinarySvm(
        sv_x=X[keep].copy(),
        sv_coef=(alphas[keep] * y[keep]).copy(),
        bias=float(b),
        gamma=float(gamma),
        alphas=alphas,
        sweeps=sweeps,
        converged=passes >= max_passes,
    )


class RbfSvmClassifier(BaseEstimator, ClassifierMixin):
    """One-vs-rest RBF support vector machine.

    Parameters
    ----------
    c : float
        Box constraint on the multipliers.
    gamma : float or "scale"
        Kernel width; "scale" resolves against the training data at fit time.
    smo_tol : float
        KKT violation tolerance used by the solver.
    max_passes : int
        Consecutive sweeps without an update needed to declare convergence.
    random_state : int
        Seeds the per-class solvers; class k uses a fixed derivation of this.
    """

    def __init__(
        self,
        c: float = 1.0,
        gamma="scale",
        smo_tol: float = 1e-3,
        max_passes: int = 10,
        random_state: int = 0,
    ):
        self.c = c
        self.gamma = gamma
        self.smo_tol = smo_tol
        self.max_passes = max_passes
        self.random_state = random_state

    def fit(self, X, y):
        X = as_float_matrix(X)
        y = as_label_vector(y, X.shape[0])
        self.n_classes_ = require_multiclass(y)
        self.classes_ = np.arange(self.n_classes_)
        self.n_features_in_ = X.shape[1]
        self.gamma_ = resolve_gamma(self.gamma, X)
        self.machines_ = []
        for k in range(self.n_classes_):
            y_signed = np.where(y == k, 1.0, -1.0)
            self.machines_.append(
                smo_train_binary(
                    X,
                    y_signed,
                    c=float(self.c),
                    gamma=self.gamma_,
                    smo_tol=float(self.smo_tol),
                    max_passes=int(self.max_passes),
                    rng=rng_for(self.random_state, k),
                )
            )
        return self

    def _check_ready(self, X):
        if not hasattr(self, "machines_"):
            raise NotFittedError("RbfSvmClassifier.fit must run before prediction")
        X = as_float_matrix(X, allow_empty=True)
        check_n_features(self.n_features_in_, X)
        return X

    def decision_function(self, X):
        X = self._check_ready(X)
        return np.column_stack([m.decision(X) for m in self.machines_])

    def predict(self, X):
        return np.argmax(self.decision_function(X), axis=1)
