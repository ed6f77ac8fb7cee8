"""Explicit label-vector distributions and brute-force Bayes-optimal prediction."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidDistribution, LengthMismatch, TooManyLabels
from .losses import LossKind, compute_loss, row_losses

MAX_BRUTE_FORCE_LABELS = 20
TIE_TOL = 1e-12


@dataclass(frozen=True)
class ConditionalDistribution:
    """Probability mass over ``{0,1}^m`` given by its support points."""

    m: int
    support: tuple  # ((label tuple, probability), ...)

    # probabilities are held as exact Fractions (floats convert exactly) so
    # marginals are rounded once, at the end

    def __post_init__(self):
        seen = set()
        cleaned = []
        for y, p in self.support:
            y = tuple(int(v) for v in y)
            if len(y) != self.m or any(v not in (0, 1) for v in y):
                raise InvalidDistribution(f"bad label vector {y} for m={self.m}")
            if y in seen:
                raise InvalidDistribution(f"duplicate support point {y}")
            p = p if isinstance(p, Fraction) else Fraction(p)
            if not 0 <= p <= 1:
                raise InvalidDistribution(f"probability {p} outside [0, 1]")
            seen.add(y)
            cleaned.append((y, p))
        if not cleaned or abs(float(sum(p for _, p in cleaned)) - 1.0) > 1e-12:
            raise InvalidDistribution("probabilities must sum to 1")
        object.__setattr__(self, "support", tuple(cleaned))

    @classmethod
    def from_json(cls, text: str) -> "ConditionalDistribution":
        """Parse ``[{"y": [0, 1, ...], "p": ...}, ...]``; ``p`` may be a string like ``"3/12"``."""
        items = json.loads(text)
        if not isinstance(items, list) or not items:
            raise InvalidDistribution("expected a non-empty JSON list")
        support = [(item["y"], Fraction(str(item["p"]))) for item in items]
        return cls(len(support[0][0]), tuple(support))

    def labels_matrix(self) -> np.ndarray:
        return np.array([y for y, _ in self.support], dtype=np.int64)

    def probabilities(self) -> np.ndarray:
        return np.array([float(p) for _, p in self.support], dtype=np.float64)

    def prob(self, y) -> float:
        y = tuple(int(v) for v in y)
        for vec, p in self.support:
            if vec == y:
                return float(p)
        return 0.0


def expected_loss(dist: ConditionalDistribution, yhat, kind) -> float:
    """Risk of predicting ``yhat``: the probability-weighted loss over the support."""
    yhat = np.asarray(yhat, dtype=np.int64)
    if yhat.shape != (dist.m,):
        raise LengthMismatch(f"prediction of length {yhat.size} for m={dist.m}")
    return float(sum(float(p) * compute_loss(kind, np.array([y]), yhat[None, :])
                     for y, p in dist.support))


def all_vectors(m: int) -> np.ndarray:
    """Every vector of ``{0,1}^m`` in lexicographic order."""
    return np.array(list(itertools.product((0, 1), repeat=m)), dtype=np.int64)


def risk_table(dist: ConditionalDistribution, kind) -> tuple:
    """(candidates, risks) for all ``2^m`` predictions, lexicographic order."""
    if dist.m > MAX_BRUTE_FORCE_LABELS:
        raise TooManyLabels(f"m={dist.m} exceeds brute-force limit {MAX_BRUTE_FORCE_LABELS}")
    cands = all_vectors(dist.m)
    ys = dist.labels_matrix()
    probs = dist.probabilities()
    risks = np.zeros(len(cands))
    # accumulate one support point at a time to bound memory
    for y, p in zip(ys, probs):
        risks += p * row_losses(kind, y[None, :], cands)
    return cands, risks


def bayes_optimal(dist: ConditionalDistribution, kind) -> tuple:
    """Lexicographically smallest minimizer of the expected loss over ``{0,1}^m``."""
    cands, risks = risk_table(dist, kind)
    # risks within TIE_TOL of the minimum are ties; the first one is lexicographically smallest
    best = int(np.flatnonzero(risks <= risks.min() + TIE_TOL)[0])
    return tuple(int(v) for v in cands[best])


def marginals(dist: ConditionalDistribution) -> np.ndarray:
    """Per-label probability of relevance."""
    exact = [sum((p for y, p in dist.support if y[j]), Fraction(0)) for j in range(dist.m)]
    return np.array([float(q) for q in exact])


def product_of_marginals(dist: ConditionalDistribution) -> tuple:
    """(vectors, probabilities) of the independent model with the same marginals."""
    if dist.m > MAX_BRUTE_FORCE_LABELS:
        raise TooManyLabels(f"m={dist.m} exceeds brute-force limit {MAX_BRUTE_FORCE_LABELS}")
    q = marginals(dist)
    vecs = all_vectors(dist.m)
    probs = np.prod(np.where(vecs == 1, q, 1.0 - q), axis=1)
    return vecs, probs


def is_independent(dist: ConditionalDistribution, tol: float = 1e-12) -> bool:
    """Whether the distribution factorizes into its marginals within ``tol``."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    vecs, indep = product_of_marginals(dist)
    actual = np.array([dist.prob(v) for v in vecs])
    return bool(np.max(np.abs(actual - indep)) <= tol)


def hamming_by_marginals(dist: ConditionalDistribution) -> tuple:
    """Hamming-optimal prediction from marginals; exact 1/2 goes to 0."""
    return tuple(int(q > 0.5 + TIE_TOL) for q in marginals(dist))


def landscape_example() -> ConditionalDistribution:
    """The four-label BEACH/FOREST/MOUNTAIN/SEA example distribution."""
    table = [
        ((0, 0, 0, 0), 3), ((0, 1, 1, 1), 1), ((1, 0, 1, 1), 2),
        ((1, 1, 0, 1), 2), ((1, 1, 1, 0), 2), ((1, 1, 1, 1), 2),
    ]
    return ConditionalDistribution(4, tuple((y, Fraction(c, 12)) for y, c in table))


def summarize(dist: ConditionalDistribution, kinds=None) -> dict:
    """Optimal prediction and its risk for each loss kind."""
    from .losses import CANONICAL_KINDS
    out = {}
    for kind in kinds or CANONICAL_KINDS:
        yhat = bayes_optimal(dist, kind)
        out[kind.value] = {"prediction": list(yhat), "risk": expected_loss(dist, yhat, kind)}
    out["marginals"] = marginals(dist).tolist()
    return out


__all__ = [
    "ConditionalDistribution", "LossKind", "expected_loss", "bayes_optimal", "marginals",
    "is_independent", "risk_table", "hamming_by_marginals", "landscape_example", "summarize",
]
