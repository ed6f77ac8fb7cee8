"""Backend selection for the hot kernels.

The compiled extension ``_ckernels`` is used when it was built; otherwise the
NumPy fallback in ``_pykernels`` is loaded. Setting ``MLCPLAN_PURE_PYTHON=1``
forces the fallback.
"""
import os

import numpy as np

from . import _pykernels

if os.environ.get("MLCPLAN_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def best_split(X, y, order, n_classes, min_leaf):
    return _impl.best_split(
        np.ascontiguousarray(X, dtype=np.float64),
        np.ascontiguousarray(y, dtype=np.int64),
        np.ascontiguousarray(order, dtype=np.int64),
        int(n_classes), int(min_leaf),
    )


def pairwise_distances(A, B, metric="euclidean"):
    code = {"euclidean": 0, "manhattan": 1}[metric]
    return _impl.pairwise_distances(
        np.ascontiguousarray(A, dtype=np.float64),
        np.ascontiguousarray(B, dtype=np.float64),
        code,
    )


def subset_mismatch_counts(masks, m, k):
    if m > 63:
        raise ValueError("bitmask kernel supports at most 63 labels")
    return _impl.subset_mismatch_counts(list(masks), int(m), int(k))
