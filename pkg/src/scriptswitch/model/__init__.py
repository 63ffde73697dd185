"""Feature models, the AdamW optimizer and the linear classifier."""

from .classifier import ClassifierModel, Prediction, cross_entropy, predict, predict_many, softmax, train_classifier
from .features import FeatureModel, SparseVector, coverage, featurize, featurize_many, fit_feature_model
from .optim import AdamWState, TrainConfig, adamw_step

__all__ = [
    "AdamWState",
    "ClassifierModel",
    "FeatureModel",
    "Prediction",
    "SparseVector",
    "TrainConfig",
    "adamw_step",
    "coverage",
    "cross_entropy",
    "featurize",
    "featurize_many",
    "fit_feature_model",
    "predict",
    "predict_many",
    "softmax",
    "train_classifier",
]
