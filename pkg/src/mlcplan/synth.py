"""Seeded synthetic multi-label datasets used as fixtures and demos.

``blobs``
    Each label owns a well-separated centre offset; a row's features are the
    sum of the offsets of its active labels plus unit Gaussian noise.
``xor-dependence``
    Standard normal features; the last label is ``(x0 > 0) XOR (x1 > 0)``,
    which no linear model can fit; the others are noisy linear thresholds.
``copy-label``
    Noisy linear threshold labels, except that the second label is an exact
    copy of the first.
"""
from __future__ import annotations

import numpy as np

from .data import Dataset
from .errors import InvalidSize

SYNTH_KINDS = ("blobs", "xor-dependence", "copy-label")
BLOB_SEPARATION = 6.0
BLOB_LABEL_RATE = 0.3


def _check_sizes(kind, n_rows, n_features, n_labels):
    for name, v in (("rows", n_rows), ("features", n_features), ("labels", n_labels)):
        if isinstance(v, bool) or int(v) != v or v < 1:
            raise InvalidSize(f"number of {name} must be a positive integer, got {v!r}")
    if kind == "xor-dependence" and n_features < 2:
        raise InvalidSize("xor-dependence needs at least 2 features")
    if kind == "copy-label" and n_labels < 2:
        raise InvalidSize("copy-label needs at least 2 labels")


def _linear_labels(rng, X, n_labels, noise=0.25):
    W = rng.standard_normal((X.shape[1], n_labels))
    W /= np.linalg.norm(W, axis=0, keepdims=True)
    return (X @ W + noise * rng.standard_normal((X.shape[0], n_labels)) > 0).astype(np.int8)


def blobs(n_rows, n_features, n_labels, seed=0) -> Dataset:
    _check_sizes("blobs", n_rows, n_features, n_labels)
    rng = np.random.default_rng(seed)
    centres = rng.standard_normal((n_labels, n_features))
    centres *= BLOB_SEPARATION / np.linalg.norm(centres, axis=1, keepdims=True)
    Y = (rng.random((n_rows, n_labels)) < BLOB_LABEL_RATE).astype(np.int8)
    X = Y @ centres + rng.standard_normal((n_rows, n_features))
    return Dataset(X, Y)


def xor_dependence(n_rows, n_features, n_labels, seed=0) -> Dataset:
    _check_sizes("xor-dependence", n_rows, n_features, n_labels)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n_rows, n_features))
    Y = np.empty((n_rows, n_labels), dtype=np.int8)
    if n_labels > 1:
        Y[:, :-1] = _linear_labels(rng, X, n_labels - 1)
    Y[:, -1] = (X[:, 0] > 0) ^ (X[:, 1] > 0)
    return Dataset(X, Y)


def copy_label(n_rows, n_features, n_labels, seed=0) -> Dataset:
    _check_sizes("copy-label", n_rows, n_features, n_labels)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n_rows, n_features))
    Y = _linear_labels(rng, X, n_labels)
    Y[:, 1] = Y[:, 0]
    return Dataset(X, Y)


def synth_generate(kind: str, n_rows: int, n_features: int, n_labels: int, seed: int = 0) -> Dataset:
    """Dispatch on ``kind``; deterministic for a given seed."""
    makers = {"blobs": blobs, "xor-dependence": xor_dependence, "copy-label": copy_label}
    if kind not in makers:
        raise InvalidSize(f"unknown generator {kind!r}; choose from {', '.join(SYNTH_KINDS)}")
    return makers[kind](n_rows, n_features, n_labels, seed)


def libre_fixture(n_rows=200, seed=7) -> Dataset:
    """Two features uniform on [-1, 1]; label 1 is ``x0 > 0``, label 2 is the XOR of both signs."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(n_rows, 2))
    Y = np.column_stack([X[:, 0] > 0, (X[:, 0] > 0) ^ (X[:, 1] > 0)]).astype(np.int8)
    return Dataset(X, Y, feature_names=("x0", "x1"), label_names=("sign", "xor"))
