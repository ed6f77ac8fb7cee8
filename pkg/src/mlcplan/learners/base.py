"""Learner specifications, the fitted-model contract and the fit dispatcher."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, EmptyData, InvalidParam

# (kind, lo, hi[, log]) for numeric, ("choice", values) for categorical
PARAM_SPACES = {
    "logistic": {
        "learning_rate": ("float", 1e-4, 1.0, True),
        "iterations": ("int", 50, 1000),
        "l2": ("float", 0.0, 1.0),
    },
    "tree": {
        "max_depth": ("int", 1, 12),
        "min_leaf": ("int", 1, 20),
    },
    "gaussian_nb": {
        "var_smoothing": ("float", 1e-12, 1e-3, True),
    },
    "knn": {
        "k": ("int", 1, 25),
        "distance": ("choice", ("euclidean", "manhattan")),
    },
    "nd_ensemble": {
        "ensemble_size": ("int", 1, 10),
    },
    # diagnostic test double: sleeps, then predicts the majority class
    "sleeper": {
        "seconds": ("float", 0.0, 600.0),
    },
}

DEFAULTS = {
    "logistic": {"learning_rate": 0.1, "iterations": 300, "l2": 0.0},
    "tree": {"max_depth": 6, "min_leaf": 1},
    "gaussian_nb": {"var_smoothing": 1e-9},
    "knn": {"k": 5, "distance": "euclidean"},
    "nd_ensemble": {"ensemble_size": 5},
    "sleeper": {"seconds": 5.0},
}


@dataclass(frozen=True)
class LearnerSpec:
    name: str
    params: dict = field(default_factory=dict)
    nested: "LearnerSpec | None" = None

    def resolved_params(self) -> dict:
        """Defaults overlaid with explicit params, validated against the space."""
        if self.name not in PARAM_SPACES:
            raise InvalidParam("name", f"unknown learner {self.name!r}")
        space = PARAM_SPACES[self.name]
        out = dict(DEFAULTS[self.name])
        for key, value in self.params.items():
            if key not in space:
                raise InvalidParam(key, f"not a parameter of {self.name}")
            out[key] = value
        for key, value in out.items():
            out[key] = _check_value(key, value, space[key])
        if self.name == "nd_ensemble" and self.nested is None:
            raise InvalidParam("nested", "nd_ensemble needs an inner binary learner")
        return out

    def to_dict(self) -> dict:
        d = {"name": self.name, "params": dict(self.params)}
        if self.nested is not None:
            d["nested"] = self.nested.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "LearnerSpec":
        nested = d.get("nested")
        return cls(d["name"], dict(d.get("params", {})),
                   cls.from_dict(nested) if nested else None)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LearnerSpec":
        return cls.from_dict(json.loads(text))


def _check_value(name, value, space):
    kind = space[0]
    if kind == "choice":
        if value not in space[1]:
            raise InvalidParam(name, f"{value!r} not in {space[1]}")
        return value
    lo, hi = space[1], space[2]
    if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
        raise InvalidParam(name, f"{value!r} is not numeric")
    if kind == "int":
        if float(value) != math.floor(float(value)):
            raise InvalidParam(name, f"{value!r} is not an integer")
        value = int(value)
    else:
        value = float(value)
    if not lo <= value <= hi:
        raise InvalidParam(name, f"{value} outside [{lo}, {hi}]")
    return value


class Model:
    """A fitted single-label model; immutable after construction."""

    def __init__(self, spec, params, class_labels, n_features, predictor):
        self.spec = spec
        self.params = params
        self.class_labels = tuple(class_labels)
        self.n_features = n_features
        self._predictor = predictor

    @property
    def name(self):
        return self.spec.name

    def predict_scores(self, X) -> np.ndarray:
        """Class-probability rows, columns ordered as ``class_labels``."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(f"expected {self.n_features} columns, got {X.shape}")
        return self._predictor.proba(X)

    def predict(self, X) -> np.ndarray:
        scores = self.predict_scores(X)
        return np.asarray(self.class_labels)[np.argmax(scores, axis=1)]

    def proba_of(self, X, label) -> np.ndarray:
        """Probability column for ``label``; zeros if the label was never seen."""
        scores = self.predict_scores(X)
        if label in self.class_labels:
            return scores[:, self.class_labels.index(label)]
        return np.zeros(scores.shape[0])


class ConstantPredictor:
    def __init__(self, n_classes, index=0):
        self.n_classes = n_classes
        self.index = index

    def proba(self, X):
        out = np.zeros((X.shape[0], self.n_classes))
        out[:, self.index] = 1.0
        return out


def _as_training_data(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise EmptyData(f"need a non-empty 2-d feature matrix, got shape {X.shape}")
    if y.shape != (X.shape[0],):
        raise DimensionMismatch(f"{X.shape[0]} rows but {y.shape} targets")
    if not np.all(np.isfinite(X)):
        raise EmptyData("features contain NaN or Inf")
    return X, y


def fit_learner(spec: LearnerSpec, X, y, seed: int = 0) -> Model:
    """Fit ``spec`` on features ``X`` and class vector ``y``.

    Classes are the sorted distinct values of ``y``. Data with a single class
    yields a constant model for that class, whatever the learner.
    """
    from . import dichotomies, knn, logistic, naive_bayes, sleeper, tree

    params = spec.resolved_params()
    X, y = _as_training_data(X, y)
    classes, y_idx = np.unique(y, return_inverse=True)
    y_idx = y_idx.astype(np.int64)
    if spec.name == "sleeper":
        # sleeping happens even on single-class data
        sleeper.sleep(params["seconds"])
    if len(classes) == 1:
        predictor = ConstantPredictor(1, 0)
    else:
        fitters = {
            "logistic": logistic.fit,
            "tree": tree.fit,
            "gaussian_nb": naive_bayes.fit,
            "knn": knn.fit,
            "nd_ensemble": dichotomies.fit_predictor,
            "sleeper": sleeper.fit,
        }
        predictor = fitters[spec.name](X, y_idx, len(classes), params, seed, spec.nested)
    return Model(spec, params, classes.tolist(), X.shape[1], predictor)
