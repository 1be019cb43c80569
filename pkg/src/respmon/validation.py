"""Input validation helpers shared by the estimators."""

import numpy as np

from .errors import DimensionMismatch, EmptyMatrix, NonFiniteInput, SingleClassTraining


def as_float_matrix(X, name="X", allow_empty=False) -> np.ndarray:
    """Coerce X to a 2-D float64 array and check it is finite."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got ndim={X.ndim}")
    if X.shape[0] == 0 and not allow_empty:
        raise EmptyMatrix(f"{name} has no rows")
    if not np.all(np.isfinite(X)):
        raise NonFiniteInput(f"{name} contains NaN or infinite entries")
    return X


def as_label_vector(y, n_rows=None) -> np.ndarray:
    """Coerce y to a 1-D int64 array of non-negative class codes."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise DimensionMismatch(f"y must be 1-D, got ndim={y.ndim}")
    if y.size and not np.issubdtype(y.dtype, np.integer):
        yf = np.asarray(y, dtype=np.float64)
        if not np.all(np.isfinite(yf)) or not np.all(yf == np.round(yf)):
            raise NonFiniteInput("y must hold integer class codes")
    y = y.astype(np.int64)
    if y.size and y.min() < 0:
        raise NonFiniteInput("class codes must be non-negative")
    if n_rows is not None and y.shape[0] != n_rows:
        raise DimensionMismatch(f"X has {n_rows} rows but y has {y.shape[0]}")
    return y


def check_n_features(n_expected: int, X: np.ndarray, name="X") -> None:
    if X.shape[1] != n_expected:
        raise DimensionMismatch(
            f"{name} has {X.shape[1]} features, model was fitted with {n_expected}"
        )


def require_multiclass(y: np.ndarray) -> int:
    """Return max(y)+1 after checking at least two classes are present."""
    present = np.unique(y)
    if present.size < 2:
        raise SingleClassTraining(
            f"training labels contain a single class ({present.tolist()})"
        )
    return int(y.max()) + 1
