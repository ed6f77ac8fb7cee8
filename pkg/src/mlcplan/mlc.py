"""Problem-transformation multi-label learners.

Binary relevance (BR), label-wise base-learner selection (LiBRe), classifier
chains (CC), ensembles of chains (ECC) and label powerset (LP). All of them
produce an S x m matrix of label relevance scores in [0, 1].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._common import derive_seed
from .data import Dataset
from .errors import AllCandidatesFailed, DimensionMismatch, InvalidParam, LabelFitError, LearnerError
from .learners import LearnerSpec, fit_learner
from .losses import threshold_scores

MLC_NAMES = ("br", "libre", "cc", "ecc", "lp")
# chains feed thresholded predictions forward at this cut
CHAIN_TAU = 0.5


@dataclass(frozen=True)
class MlcSpec:
    name: str
    params: dict = field(default_factory=dict)
    base: object = None  # LearnerSpec, or a tuple of LearnerSpec for libre

    def __post_init__(self):
        if self.name not in MLC_NAMES:
            raise InvalidParam("name", f"unknown multi-label method {self.name!r}")
        if self.name == "libre":
            cands = tuple(self.base or ())
            if not cands:
                raise InvalidParam("base", "libre needs at least one candidate")
            object.__setattr__(self, "base", cands)
            ratio = self.params.get("selection_ratio", 0.7)
            if not 0.0 < ratio < 1.0:
                raise InvalidParam("selection_ratio", f"{ratio} outside (0, 1)")
        elif self.base is None:
            raise InvalidParam("base", f"{self.name} needs a base learner")
        if self.name == "ecc" and int(self.params.get("ensemble_size", 5)) < 1:
            raise InvalidParam("ensemble_size", "must be at least 1")

    def to_dict(self) -> dict:
        base = ([b.to_dict() for b in self.base] if self.name == "libre"
                else self.base.to_dict())
        return {"name": self.name, "params": dict(self.params), "base": base}

    @classmethod
    def from_dict(cls, d: dict) -> "MlcSpec":
        base = d.get("base")
        if isinstance(base, list):
            base = tuple(LearnerSpec.from_dict(b) for b in base)
        elif base is not None:
            base = LearnerSpec.from_dict(base)
        return cls(d["name"], dict(d.get("params", {})), base)


def _check_x(X, n_features):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != n_features:
        raise DimensionMismatch(f"expected {n_features} feature columns, got shape {X.shape}")
    return X


def _fit_label(spec, X, y, seed, label):
    try:
        return fit_learner(spec, X, y, seed)
    except LearnerError as exc:
        raise LabelFitError(label, exc) from exc


class MlcModel:
    """Base class for fitted multi-label models."""

    name = ""

    def __init__(self, m, n_features):
        self.m = m
        self.n_features = n_features

    def predict_scores(self, X) -> np.ndarray:
        X = _check_x(X, self.n_features)
        return np.clip(self._scores(X), 0.0, 1.0)

    def _scores(self, X):
        raise NotImplementedError


class BRModel(MlcModel):
    name = "br"

    def __init__(self, models, n_features):
        super().__init__(len(models), n_features)
        self.models = models

    def _scores(self, X):
        return np.column_stack([mdl.proba_of(X, 1) for mdl in self.models])


class LibreModel(BRModel):
    name = "libre"

    def __init__(self, models, n_features, choices, selection_errors):
        super().__init__(models, n_features)
        self.choices = choices
        self.selection_errors = selection_errors


class CCModel(MlcModel):
    name = "cc"

    def __init__(self, order, models, n_features):
        super().__init__(len(order), n_features)
        self.order = np.asarray(order)
        self.models = models

    def _scores(self, X):
        scores = np.zeros((X.shape[0], self.m))
        prev = np.zeros((X.shape[0], 0))
        for t, label in enumerate(self.order):
            p = self.models[t].proba_of(np.hstack([X, prev]), 1)
            scores[:, label] = p
            prev = np.hstack([prev, (p >= CHAIN_TAU).astype(np.float64)[:, None]])
        return scores


class ECCModel(MlcModel):
    name = "ecc"

    def __init__(self, chains, n_features):
        super().__init__(chains[0].m, n_features)
        self.chains = chains

    def member_scores(self, X):
        X = _check_x(X, self.n_features)
        return [chain.predict_scores(X) for chain in self.chains]

    def _scores(self, X):
        return np.mean([chain._scores(X) for chain in self.chains], axis=0)


class LPModel(MlcModel):
    name = "lp"

    def __init__(self, labelsets, model, n_features):
        super().__init__(labelsets.shape[1], n_features)
        self.labelsets = labelsets
        self.model = model

    def class_scores(self, X):
        # class indices are 0..K-1 and all occur in training, so columns align
        return self.model.predict_scores(X)

    def _scores(self, X):
        return self.class_scores(X) @ self.labelsets.astype(np.float64)

    def predict_labelsets(self, X) -> np.ndarray:
        """Label vector of the most probable class; always a training labelset."""
        X = _check_x(X, self.n_features)
        return self.labelsets[np.argmax(self.class_scores(X), axis=1)].copy()


def fit_br(base: LearnerSpec, ds: Dataset, seed: int = 0) -> BRModel:
    """One independent binary model per label column."""
    X = ds.features
    models = [_fit_label(base, X, ds.labels[:, j], derive_seed(seed, j), j)
              for j in range(ds.n_labels)]
    return BRModel(models, ds.n_features)


def _selection_split(n_rows, ratio, seed):
    perm = np.random.default_rng(seed).permutation(n_rows)
    n_fit = math.ceil(ratio * n_rows)
    if n_rows < 2 or n_fit >= n_rows:
        return None
    return perm[:n_fit], perm[n_fit:]


def fit_libre(candidates, ds: Dataset, selection_ratio: float = 0.7, seed: int = 0) -> LibreModel:
    """Binary relevance with the base learner chosen separately for each label.

    Per label, every candidate is fitted on the selection-train rows and scored
    by error rate on the selection-validation rows (same row split for every
    label). The lowest error wins, ties going to the earlier candidate, and
    the winner is refitted on all rows.
    """
    candidates = tuple(candidates)
    if not candidates:
        raise InvalidParam("candidates", "need at least one candidate")
    if not 0.0 < selection_ratio < 1.0:
        raise InvalidParam("selection_ratio", f"{selection_ratio} outside (0, 1)")
    X, Y = ds.features, ds.labels
    split = _selection_split(ds.n_rows, selection_ratio, seed)
    models, choices, table = [], [], []
    for j in range(ds.n_labels):
        label_seed = derive_seed(seed, j)
        errors = []
        for c, cand in enumerate(candidates):
            if split is None:
                errors.append(0.0)
                continue
            fit_rows, val_rows = split
            try:
                mdl = fit_learner(cand, X[fit_rows], Y[fit_rows, j], derive_seed(label_seed, c))
            except LearnerError:
                errors.append(math.inf)
                continue
            pred = (mdl.proba_of(X[val_rows], 1) >= 0.5).astype(np.int8)
            errors.append(float(np.mean(pred != Y[val_rows, j])))
        if all(math.isinf(e) for e in errors):
            raise AllCandidatesFailed(j)
        winner = int(np.argmin(errors))
        table.append(errors)
        choices.append(candidates[winner])
        models.append(_fit_label(candidates[winner], X, Y[:, j], label_seed, j))
    return LibreModel(models, ds.n_features, choices, np.array(table))


def fit_cc(base: LearnerSpec, order_seed: int, ds: Dataset, seed: int = 0, order=None) -> CCModel:
    """Classifier chain over a seeded random label order.

    Position ``t`` is trained on the features plus the true values of the
    ``t`` labels before it; at prediction time those columns are filled with
    the chain's own thresholded predictions.
    """
    m = ds.n_labels
    if order is None:
        order = np.random.default_rng(order_seed).permutation(m)
    order = np.asarray(order, dtype=np.int64)
    if sorted(order.tolist()) != list(range(m)):
        raise InvalidParam("order", f"{order.tolist()} is not a permutation of 0..{m - 1}")
    X, Y = ds.features, ds.labels.astype(np.float64)
    models = []
    for t, label in enumerate(order):
        Xt = np.hstack([X, Y[:, order[:t]]])
        models.append(_fit_label(base, Xt, ds.labels[:, label], derive_seed(seed, t), int(label)))
    return CCModel(order, models, ds.n_features)


def fit_ecc(base: LearnerSpec, ensemble_size: int, seed: int, ds: Dataset) -> ECCModel:
    """Average of ``ensemble_size`` chains with independently seeded orders."""
    if ensemble_size < 1:
        raise InvalidParam("ensemble_size", "must be at least 1")
    chains = [fit_cc(base, derive_seed(seed, i, 0), ds, derive_seed(seed, i, 1))
              for i in range(ensemble_size)]
    return ECCModel(chains, ds.n_features)


def fit_lp(base_multiclass: LearnerSpec, ds: Dataset, seed: int = 0) -> LPModel:
    """Each distinct training labelset (first-appearance order) becomes one class."""
    index = {}
    y = np.empty(ds.n_rows, dtype=np.int64)
    for i, row in enumerate(ds.labels):
        key = row.tobytes()
        if key not in index:
            index[key] = len(index)
        y[i] = index[key]
    labelsets = np.zeros((len(index), ds.n_labels), dtype=np.int8)
    for key, c in index.items():
        labelsets[c] = np.frombuffer(key, dtype=np.int8)
    try:
        model = fit_learner(base_multiclass, ds.features, y, seed)
    except LearnerError as exc:
        raise LabelFitError("labelset", exc) from exc
    return LPModel(labelsets, model, ds.n_features)


def fit_mlc(spec: MlcSpec, ds: Dataset, seed: int = 0) -> MlcModel:
    """Dispatch on ``spec.name``."""
    p = spec.params
    if spec.name == "br":
        return fit_br(spec.base, ds, seed)
    if spec.name == "libre":
        return fit_libre(spec.base, ds, p.get("selection_ratio", 0.7), p.get("seed", seed))
    if spec.name == "cc":
        return fit_cc(spec.base, p.get("order_seed", seed), ds, seed)
    if spec.name == "ecc":
        return fit_ecc(spec.base, int(p.get("ensemble_size", 5)), p.get("seed", seed), ds)
    return fit_lp(spec.base, ds, seed)


def predict_mlc(model: MlcModel, X, tau: float = 0.5):
    """(scores, hard) where ``hard = threshold_scores(scores, tau)``."""
    scores = model.predict_scores(X)
    return scores, threshold_scores(scores, tau)
