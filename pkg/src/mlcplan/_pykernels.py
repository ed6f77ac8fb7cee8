"""Pure-Python/NumPy implementations of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature and
the same floating-point operation order, so both backends agree bit-for-bit.
"""
from itertools import combinations

import numpy as np


def best_split(X, y, order, n_classes, min_leaf):
    """Find the Gini-optimal axis-aligned split.

    Parameters
    ----------
    X : (n, d) float64 array
    y : (n,) int64 array of class indices in ``[0, n_classes)``
    order : (n, d) int64 array, ``order[:, f]`` is a stable argsort of ``X[:, f]``
    n_classes : int
    min_leaf : int

    Returns
    -------
    (feature, threshold, score)
        ``score`` is ``sum(c_l**2)/n_l + sum(c_r**2)/n_r`` (larger is purer).
        ``feature == -1`` when no admissible split exists.
    """
    n, d = X.shape
    onehot = np.zeros((n, n_classes), dtype=np.int64)
    onehot[np.arange(n), y] = 1
    total = onehot.sum(axis=0)

    best_f, best_thr, best_score = -1, 0.0, -1.0
    n_left = np.arange(1, n, dtype=np.int64)
    n_right = n - n_left
    size_ok = (n_left >= min_leaf) & (n_right >= min_leaf)
    for f in range(d):
        idx = order[:, f]
        xs = X[idx, f]
        left = np.cumsum(onehot[idx], axis=0)[:-1]
        right = total - left
        sq_left = (left * left).sum(axis=1)
        sq_right = (right * right).sum(axis=1)
        valid = size_ok & (xs[:-1] < xs[1:])
        if not valid.any():
            continue
        score = sq_left.astype(np.float64) / n_left.astype(np.float64) \
            + sq_right.astype(np.float64) / n_right.astype(np.float64)
        score = np.where(valid, score, -1.0)
        i = int(np.argmax(score))
        if score[i] > best_score:
            best_f, best_score = f, float(score[i])
            best_thr = 0.5 * (xs[i] + xs[i + 1])
    return best_f, float(best_thr), best_score


def pairwise_distances(A, B, metric):
    """Distance matrix between rows of ``A`` (n, d) and ``B`` (p, d).

    ``metric`` is 0 for euclidean, 1 for manhattan.
    """
    n, d = A.shape
    acc = np.zeros((n, B.shape[0]), dtype=np.float64)
    for j in range(d):
        diff = A[:, j][:, None] - B[:, j][None, :]
        if metric == 0:
            acc += diff * diff
        else:
            acc += np.abs(diff)
    if metric == 0:
        np.sqrt(acc, out=acc)
    return acc


def subset_mismatch_counts(masks, m, k):
    """For each error bitmask, count size-``k`` subsets of ``range(m)`` hitting it."""
    out = np.zeros(len(masks), dtype=np.int64)
    cache = {}
    for i, mask in enumerate(masks):
        mask = int(mask)
        if mask not in cache:
            cache[mask] = sum(
                1 for subset in combinations(range(m), k)
                if any((mask >> j) & 1 for j in subset)
            )
        out[i] = cache[mask]
    return out
