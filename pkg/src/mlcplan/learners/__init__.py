"""Single-label base learners, nested dichotomies and preprocessors."""
from .base import DEFAULTS, PARAM_SPACES, LearnerSpec, Model, fit_learner
from .dichotomies import NDTree, fit_nd_ensemble, sample_dichotomy, tree_proba
from .preprocess import PREPROCESSOR_SPACES, Transform, apply_transform, fit_preprocessor


def predict_scores(model: Model, X):
    return model.predict_scores(X)


__all__ = [
    "DEFAULTS", "PARAM_SPACES", "PREPROCESSOR_SPACES", "LearnerSpec", "Model", "NDTree",
    "Transform", "apply_transform", "fit_learner", "fit_nd_ensemble", "fit_preprocessor",
    "predict_scores", "sample_dichotomy", "tree_proba",
]
