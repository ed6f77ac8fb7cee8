"""CART classification tree with Gini impurity."""
import numpy as np

from .. import kernels
from .._common import check_deadline


class TreePredictor:
    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)

    @property
    def n_nodes(self):
        return len(self.feature)

    def apply(self, X):
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            internal = self.feature[node] >= 0
            if not internal.any():
                return node
            idx = np.flatnonzero(internal)
            cur = node[idx]
            go_left = X[idx, self.feature[cur]] <= self.threshold[cur]
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])

    def proba(self, X):
        return self.value[self.apply(X)]


def fit(X, y, n_classes, params, seed, nested=None):
    max_depth, min_leaf = params["max_depth"], params["min_leaf"]
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(rows):
        counts = np.bincount(y[rows], minlength=n_classes)
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(counts / counts.sum())
        return len(feature) - 1, counts

    root, root_counts = new_node(np.arange(X.shape[0]))
    stack = [(root, np.arange(X.shape[0]), 0, root_counts)]
    while stack:
        check_deadline()
        node, rows, depth, counts = stack.pop()
        n = len(rows)
        if depth >= max_depth or n < 2 * min_leaf or np.count_nonzero(counts) <= 1:
            continue
        Xn = X[rows]
        yn = y[rows]
        order = np.argsort(Xn, axis=0, kind="stable")
        f, thr, _ = kernels.best_split(Xn, yn, order, n_classes, min_leaf)
        # Gini gain is never negative, so any admissible split of an impure node
        # is taken; zero-gain splits are needed for XOR-like structure
        if f < 0:
            continue
        mask = Xn[:, f] <= thr
        lrows, rrows = rows[mask], rows[~mask]
        feature[node], threshold[node] = f, thr
        lnode, lcounts = new_node(lrows)
        rnode, rcounts = new_node(rrows)
        left[node], right[node] = lnode, rnode
        stack.append((rnode, rrows, depth + 1, rcounts))
        stack.append((lnode, lrows, depth + 1, lcounts))
    return TreePredictor(feature, threshold, left, right, value)
