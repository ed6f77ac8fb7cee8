"""L2-regularized logistic regression by full-batch gradient descent.

Features are standardized internally. More than two classes are handled
one-vs-rest with row-normalized probabilities.
"""
import numpy as np

from .._common import check_deadline
from ..errors import NumericalFailure

_CHECK_EVERY = 25


def sigmoid(z):
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_grad(w, b, X, y, l2):
    """Mean log-loss plus ``l2/2 * ||w||^2`` and its gradient w.r.t. ``(w, b)``."""
    z = X @ w + b
    # log(1 + exp(z)) - y z, computed stably
    loss = np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * np.dot(w, w)
    resid = sigmoid(z) - y
    grad_w = X.T @ resid / X.shape[0] + l2 * w
    grad_b = np.mean(resid)
    return float(loss), grad_w, float(grad_b)


def fit_binary(X, y, learning_rate, iterations, l2):
    w = np.zeros(X.shape[1])
    b = 0.0
    for it in range(iterations):
        if it % _CHECK_EVERY == 0:
            check_deadline()
        loss, gw, gb = loss_and_grad(w, b, X, y, l2)
        if not np.isfinite(loss):
            raise NumericalFailure(f"non-finite logistic loss at iteration {it}")
        w -= learning_rate * gw
        b -= learning_rate * gb
    return w, b


class LogisticPredictor:
    def __init__(self, mean, scale, W, B):
        self.mean, self.scale = mean, scale
        self.W, self.B = W, B

    def proba(self, X):
        Z = ((X - self.mean) / self.scale) @ self.W + self.B
        P = sigmoid(Z.ravel()).reshape(Z.shape)
        if P.shape[1] == 1:
            p1 = P[:, 0]
            return np.column_stack([1.0 - p1, p1])
        total = P.sum(axis=1, keepdims=True)
        # rows where every one-vs-rest model says ~0 fall back to uniform
        safe = np.where(total > 0, total, 1.0)
        out = np.where(total > 0, P / safe, 1.0 / P.shape[1])
        return out


def standardize_stats(X):
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0] = 1.0
    return mean, scale


def fit(X, y, n_classes, params, seed, nested=None):
    mean, scale = standardize_stats(X)
    Xs = (X - mean) / scale
    lr, iters, l2 = params["learning_rate"], params["iterations"], params["l2"]
    if n_classes == 2:
        w, b = fit_binary(Xs, (y == 1).astype(np.float64), lr, iters, l2)
        return LogisticPredictor(mean, scale, w[:, None], np.array([b]))
    cols, biases = [], []
    for c in range(n_classes):
        w, b = fit_binary(Xs, (y == c).astype(np.float64), lr, iters, l2)
        cols.append(w)
        biases.append(b)
    return LogisticPredictor(mean, scale, np.column_stack(cols), np.array(biases))
