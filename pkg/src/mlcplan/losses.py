"""Multi-label loss functions on hard (binary) prediction matrices.

Every loss is a minimization target in [0, 1]; the F1 measures are reported as
``1 - F1``. An F1 term whose denominator is zero (true and predicted sets both
empty) counts as F1 = 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import KOutOfRange, NonBinaryEntry, OutOfRangeScore, ShapeMismatch


class LossKind(enum.Enum):
    SUBSET_ZERO_ONE = "subset01"
    HAMMING = "hamming"
    F1_INSTANCE = "f1_instance"
    F1_LABEL = "f1_label"
    F1_MICRO = "f1_micro"

    @classmethod
    def parse(cls, name: str) -> "LossKind":
        aliases = {"f1i": "f1_instance", "f1l": "f1_label", "f1micro": "f1_micro",
                   "f1_i": "f1_instance", "f1_l": "f1_label", "subset_zero_one": "subset01"}
        key = name.strip().lower()
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class SubsetK:
    """Average subset 0/1 loss over all label subsets of size ``k``."""

    k: int


CANONICAL_KINDS = (
    LossKind.HAMMING,
    LossKind.SUBSET_ZERO_ONE,
    LossKind.F1_INSTANCE,
    LossKind.F1_LABEL,
    LossKind.F1_MICRO,
)

# closed form takes over from enumeration above this label count
ENUMERATION_MAX_LABELS = 20


def threshold_scores(scores, tau: float) -> np.ndarray:
    """Binarize ``scores``: 1 where ``score >= tau``."""
    scores = np.asarray(scores, dtype=np.float64)
    if not 0.0 <= tau <= 1.0:
        raise OutOfRangeScore(f"tau={tau} outside [0, 1]")
    if scores.size and (np.any(scores < 0.0) or np.any(scores > 1.0) or np.any(np.isnan(scores))):
        raise OutOfRangeScore("scores must lie in [0, 1]")
    return (scores >= tau).astype(np.int8)


def _check_pair(Y, Yhat):
    Y = np.asarray(Y)
    Yhat = np.asarray(Yhat)
    if Y.ndim == 1:
        Y = Y[None, :]
    if Yhat.ndim == 1:
        Yhat = Yhat[None, :]
    if Y.shape != Yhat.shape or Y.ndim != 2:
        raise ShapeMismatch(f"{Y.shape} vs {Yhat.shape}")
    for M in (Y, Yhat):
        if not np.all((M == 0) | (M == 1)):
            raise NonBinaryEntry("matrices must be binary")
    return Y.astype(np.int64), Yhat.astype(np.int64)


def _f1_ratio(tp2, denom):
    """``tp2 / denom`` elementwise with 0/0 -> 1."""
    tp2 = np.asarray(tp2, dtype=np.float64)
    denom = np.asarray(denom, dtype=np.float64)
    out = np.ones_like(denom)
    np.divide(tp2, denom, out=out, where=denom > 0)
    return out


def compute_loss(kind, Y, Yhat) -> float:
    """Loss of ``Yhat`` against ``Y`` for a :class:`LossKind` or :class:`SubsetK`."""
    if isinstance(kind, SubsetK):
        return subset_k_loss(Y, Yhat, kind.k)
    if isinstance(kind, str):
        kind = LossKind.parse(kind)
    Y, Yhat = _check_pair(Y, Yhat)
    if kind is LossKind.HAMMING:
        return float(np.mean(Y != Yhat))
    if kind is LossKind.SUBSET_ZERO_ONE:
        return float(np.mean(np.any(Y != Yhat, axis=1)))
    both = Y * Yhat
    if kind is LossKind.F1_INSTANCE:
        return 1.0 - float(np.mean(_f1_ratio(2 * both.sum(axis=1), (Y + Yhat).sum(axis=1))))
    if kind is LossKind.F1_LABEL:
        return 1.0 - float(np.mean(_f1_ratio(2 * both.sum(axis=0), (Y + Yhat).sum(axis=0))))
    if kind is LossKind.F1_MICRO:
        return 1.0 - float(_f1_ratio(2 * both.sum(), (Y + Yhat).sum()))
    raise ValueError(f"unknown loss kind {kind!r}")


def all_losses(Y, Yhat) -> dict:
    """The five canonical losses keyed by their JSON names."""
    return {k.value: compute_loss(k, Y, Yhat) for k in CANONICAL_KINDS}


def _error_masks(Y, Yhat):
    diff = (Y != Yhat).astype(np.uint64)
    weights = np.left_shift(np.uint64(1), np.arange(Y.shape[1], dtype=np.uint64))
    return (diff * weights).sum(axis=1)


def subset_k_enumerated(Y, Yhat, k: int) -> float:
    """Brute-force subset-k loss: enumerate every size-``k`` label subset."""
    Y, Yhat = _check_pair(Y, Yhat)
    m = Y.shape[1]
    if not 1 <= k <= m:
        raise KOutOfRange(f"k={k} not in 1..{m}")
    hits = kernels.subset_mismatch_counts(_error_masks(Y, Yhat), m, k)
    return float(np.mean(hits / math.comb(m, k)))


def subset_k_closed_form(Y, Yhat, k: int) -> float:
    """Subset-k loss via ``1 - C(m - e, k) / C(m, k)`` per row, ``e`` = row error count."""
    Y, Yhat = _check_pair(Y, Yhat)
    m = Y.shape[1]
    if not 1 <= k <= m:
        raise KOutOfRange(f"k={k} not in 1..{m}")
    errors = (Y != Yhat).sum(axis=1)
    total = math.comb(m, k)
    per_row = np.array([(total - math.comb(m - int(e), k)) / total for e in errors])
    return float(np.mean(per_row))


def subset_k_loss(Y, Yhat, k: int) -> float:
    """Interpolates between Hamming (``k=1``) and subset 0/1 (``k=m``)."""
    Y, Yhat = _check_pair(Y, Yhat)
    if not 1 <= k <= Y.shape[1]:
        raise KOutOfRange(f"k={k} not in 1..{Y.shape[1]}")
    # the k=1 and k=m endpoints reduce exactly to the Hamming/subset-0/1 reductions
    if k == 1:
        return compute_loss(LossKind.HAMMING, Y, Yhat)
    if k == Y.shape[1]:
        return compute_loss(LossKind.SUBSET_ZERO_ONE, Y, Yhat)
    if Y.shape[1] <= ENUMERATION_MAX_LABELS:
        return subset_k_enumerated(Y, Yhat, k)
    return subset_k_closed_form(Y, Yhat, k)


def row_losses(kind, Y, Yhat) -> np.ndarray:
    """``compute_loss`` of each row pair taken as its own 1 x m matrix.

    Broadcasts over leading dimensions, so ``Y`` of shape (a, 1, m) against
    ``Yhat`` of shape (1, b, m) gives an (a, b) table.
    """
    if isinstance(kind, str):
        kind = LossKind.parse(kind)
    Y = np.asarray(Y, dtype=np.int64)
    Yhat = np.asarray(Yhat, dtype=np.int64)
    diff = Y != Yhat
    m = np.broadcast_shapes(Y.shape, Yhat.shape)[-1]
    if isinstance(kind, SubsetK):
        errors = diff.sum(axis=-1)
        total = math.comb(m, kind.k)
        lut = np.array([(total - math.comb(m - e, kind.k)) / total for e in range(m + 1)])
        return lut[errors]
    if kind is LossKind.HAMMING:
        return diff.mean(axis=-1)
    if kind is LossKind.SUBSET_ZERO_ONE:
        return diff.any(axis=-1).astype(np.float64)
    if kind in (LossKind.F1_INSTANCE, LossKind.F1_MICRO):
        # on a single row, instance-wise and micro F1 coincide
        return 1.0 - _f1_ratio(2 * (Y * Yhat).sum(axis=-1), (Y + Yhat).sum(axis=-1))
    if kind is LossKind.F1_LABEL:
        # each 1x1 column scores F1 = 1 iff the entries agree
        return diff.mean(axis=-1)
    raise ValueError(f"unknown loss kind {kind!r}")
