"""Multi-label classification AutoML by hierarchical decomposition search.

Subpackages and modules:

``data``        dataset container, CSV and MEKA-style ARFF readers, holdout splits
``losses``      multi-label losses (subset 0/1, Hamming, F1 variants, subset-k)
``bayes``       Bayes-optimal predictions under a known label distribution
``learners``    single-label base learners written from scratch
``mlc``         BR, LiBRe, classifier chains, ECC and label powerset
``searchspace`` component registries and the decomposition search graph
``optimize``    best-first search, random search, successive halving, Hyperband
``evaluate``    candidate evaluation, repeated holdout, runtime guard
``synth``       seeded synthetic datasets
``cli``         the ``mlcplan`` command
"""
from .data import Dataset, load_csv, load_meka_arff, save_csv, split_holdout
from .errors import MlcPlanError
from .kernels import BACKEND
from .losses import LossKind, all_losses, compute_loss, subset_k_loss

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Dataset", "LossKind", "MlcPlanError", "__version__", "all_losses",
    "compute_loss", "load_csv", "load_meka_arff", "save_csv", "split_holdout", "subset_k_loss",
]
