"""k-nearest-neighbour classifier with vote-fraction scores."""
import numpy as np

from .. import kernels
from .._common import check_deadline

_CHUNK = 512


class KNNPredictor:
    def __init__(self, X, y, n_classes, k, distance):
        self.X, self.y = X, y
        self.n_classes = n_classes
        self.k = min(k, X.shape[0])
        self.distance = distance

    def proba(self, X):
        out = np.zeros((X.shape[0], self.n_classes))
        for start in range(0, X.shape[0], _CHUNK):
            check_deadline()
            block = X[start:start + _CHUNK]
            dist = kernels.pairwise_distances(block, self.X, self.distance)
            # stable sort: equidistant neighbours are taken in training order
            nearest = np.argsort(dist, axis=1, kind="stable")[:, :self.k]
            votes = self.y[nearest]
            for c in range(self.n_classes):
                out[start:start + len(block), c] = np.count_nonzero(votes == c, axis=1)
        return out / self.k


def fit(X, y, n_classes, params, seed, nested=None):
    return KNNPredictor(X.copy(), y.copy(), n_classes, params["k"], params["distance"])
