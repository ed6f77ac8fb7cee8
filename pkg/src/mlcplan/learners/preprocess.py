"""Column-wise preprocessors fitted on training data only."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, EmptyData, InvalidParam

PREPROCESSOR_SPACES = {
    "standardize": {},
    "minmax": {},
    "variance_threshold": {"threshold": ("float", 0.0, 1.0)},
}


@dataclass(frozen=True)
class Transform:
    kind: str
    n_in: int
    offset: np.ndarray | None = None
    scale: np.ndarray | None = None
    keep: np.ndarray | None = None

    @property
    def n_out(self):
        return self.n_in if self.keep is None else len(self.keep)


def fit_preprocessor(kind: str, params: dict | None, X) -> Transform:
    params = params or {}
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise EmptyData(f"cannot fit {kind} on shape {X.shape}")
    if kind == "standardize":
        scale = X.std(axis=0)
        # zero-variance columns are centred but left unscaled
        scale[scale == 0] = 1.0
        return Transform(kind, X.shape[1], offset=X.mean(axis=0), scale=scale)
    if kind == "minmax":
        lo = X.min(axis=0)
        span = X.max(axis=0) - lo
        # constant columns map to 0
        span[span == 0] = 1.0
        return Transform(kind, X.shape[1], offset=lo, scale=span)
    if kind == "variance_threshold":
        threshold = params.get("threshold", 0.0)
        if not 0.0 <= threshold <= 1.0:
            raise InvalidParam("threshold", f"{threshold} outside [0, 1]")
        var = X.var(axis=0)
        keep = np.flatnonzero(var > threshold)
        if keep.size == 0:
            keep = np.array([int(np.argmax(var))])
        return Transform(kind, X.shape[1], keep=keep)
    raise InvalidParam("kind", f"unknown preprocessor {kind!r}")


def apply_transform(t: Transform, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != t.n_in:
        raise DimensionMismatch(f"transform expects {t.n_in} columns, got {X.shape}")
    if t.keep is not None:
        return X[:, t.keep]
    return (X - t.offset) / t.scale
