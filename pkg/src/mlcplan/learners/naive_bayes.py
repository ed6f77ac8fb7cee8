"""Gaussian naive Bayes."""
import numpy as np


class GaussianNBPredictor:
    def __init__(self, log_prior, mean, var):
        self.log_prior, self.mean, self.var = log_prior, mean, var

    def proba(self, X):
        # joint log-likelihood per class, (n, K)
        jll = np.empty((X.shape[0], len(self.log_prior)))
        for c in range(len(self.log_prior)):
            diff = X - self.mean[c]
            jll[:, c] = (self.log_prior[c]
                         - 0.5 * np.sum(np.log(2.0 * np.pi * self.var[c]))
                         - 0.5 * np.sum(diff * diff / self.var[c], axis=1))
        jll -= jll.max(axis=1, keepdims=True)
        p = np.exp(jll)
        return p / p.sum(axis=1, keepdims=True)


def fit(X, y, n_classes, params, seed, nested=None):
    max_var = float(X.var(axis=0).max())
    eps = params["var_smoothing"] * max_var
    if eps <= 0:
        eps = params["var_smoothing"]
    counts = np.bincount(y, minlength=n_classes).astype(np.float64)
    mean = np.empty((n_classes, X.shape[1]))
    var = np.empty((n_classes, X.shape[1]))
    for c in range(n_classes):
        rows = X[y == c]
        mean[c] = rows.mean(axis=0)
        var[c] = rows.var(axis=0) + eps
    return GaussianNBPredictor(np.log(counts / counts.sum()), mean, var)
