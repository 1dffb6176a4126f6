"""Input checks shared by the estimator front end."""

import numpy as np
from sklearn.utils.validation import check_array, check_consistent_length


def _as_column(X, name):
    arr = check_array(X, ensure_2d=False, dtype=float, input_name=name)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(
                f"{name} must be one-dimensional or a single column, got shape {arr.shape}"
            )
        arr = arr[:, 0]
    return arr


def check_training_data(X, y):
    x = _as_column(X, "X")
    y = check_array(y, ensure_2d=False, dtype=float, input_name="y").ravel()
    check_consistent_length(x, y)
    if np.unique(x).size != x.size:
        raise ValueError("coincident nodes")
    return x, y


def check_derivatives(derivatives, n_samples):
    if derivatives is None:
        return None
    d = check_array(derivatives, ensure_2d=False, dtype=float, input_name="derivatives")
    if d.ndim == 1:
        d = d[:, None]
    if d.shape[0] != n_samples:
        raise ValueError(
            f"derivatives has {d.shape[0]} rows for {n_samples} samples"
        )
    return d


def check_queries(X):
    return _as_column(X, "X")
