"""Random nested dichotomies and their ensembles.

A nested dichotomy is a binary tree over the class set: every internal node
splits its classes in two and carries a binary model deciding between the
sides. A class's probability is the product of branch probabilities on its
root-to-leaf path.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._common import derive_seed
from ..errors import TooFewClasses
from .base import LearnerSpec, fit_learner


@dataclass
class NDTree:
    classes: tuple
    left: "NDTree | None" = None
    right: "NDTree | None" = None
    model: object = None

    @property
    def is_leaf(self):
        return self.left is None

    def leaves(self):
        if self.is_leaf:
            return [self.classes]
        return self.left.leaves() + self.right.leaves()

    def shape(self):
        """Nested tuple of class sets, ignoring fitted models."""
        if self.is_leaf:
            return self.classes
        return (self.left.shape(), self.right.shape())


def _split(classes, rng):
    while True:
        side = rng.integers(0, 2, size=len(classes))
        if 0 < side.sum() < len(classes):
            break
    left = tuple(c for c, s in zip(classes, side) if s == 0)
    right = tuple(c for c, s in zip(classes, side) if s == 1)
    return left, right


def _build(classes, rng):
    if len(classes) == 1:
        return NDTree(classes)
    left, right = _split(classes, rng)
    return NDTree(classes, _build(left, rng), _build(right, rng))


def sample_dichotomy(classes, seed: int) -> NDTree:
    """Random recursive bipartition: a fair coin per class, redrawn if one side is empty."""
    classes = tuple(classes)
    if len(classes) < 2:
        raise TooFewClasses(f"need at least 2 classes, got {len(classes)}")
    return _build(classes, np.random.default_rng(seed))


def _fit_tree(node, inner, X, y, seed, counter):
    if node.is_leaf:
        return
    rows = np.isin(y, node.classes)
    target = np.isin(y[rows], node.right.classes).astype(np.int64)
    node.model = fit_learner(inner, X[rows], target, derive_seed(seed, counter[0]))
    counter[0] += 1
    _fit_tree(node.left, inner, X, y, seed, counter)
    _fit_tree(node.right, inner, X, y, seed, counter)


def _tree_proba(node, X, out, weight):
    if node.is_leaf:
        out[:, node.classes[0]] += weight
        return
    p_right = node.model.proba_of(X, 1)
    _tree_proba(node.left, X, out, weight * (1.0 - p_right))
    _tree_proba(node.right, X, out, weight * p_right)


def tree_proba(tree: NDTree, X, n_classes) -> np.ndarray:
    out = np.zeros((X.shape[0], n_classes))
    _tree_proba(tree, X, out, np.ones(X.shape[0]))
    return out


class NDEnsemblePredictor:
    def __init__(self, trees, n_classes):
        self.trees = trees
        self.n_classes = n_classes

    def proba(self, X):
        total = np.zeros((X.shape[0], self.n_classes))
        for tree in self.trees:
            total += tree_proba(tree, X, self.n_classes)
        return total / len(self.trees)


def fit_predictor(X, y, n_classes, params, seed, nested):
    """Fit ``params['ensemble_size']`` random dichotomies over class indices."""
    trees = []
    for i in range(params["ensemble_size"]):
        tree = sample_dichotomy(range(n_classes), derive_seed(seed, i, 0))
        _fit_tree(tree, nested, X, y, derive_seed(seed, i, 1), [0])
        trees.append(tree)
    return NDEnsemblePredictor(trees, n_classes)


def fit_nd_ensemble(inner: LearnerSpec, X, y, ensemble_size: int, seed: int = 0):
    """Ensemble of randomly structured nested dichotomies with ``inner`` at every node."""
    spec = LearnerSpec("nd_ensemble", {"ensemble_size": ensemble_size}, inner)
    if len(np.unique(np.asarray(y))) < 2:
        raise TooFewClasses("nested dichotomies need at least 2 classes")
    return fit_learner(spec, X, y, seed)
