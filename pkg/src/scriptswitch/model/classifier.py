"""Multinomial logistic regression over TF-IDF features, trained with AdamW."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..corpus import LABEL_ORDER, DatasetSplit, Label
from ..errors import ModelFormatError, TrainingError
from .features import FeatureModel, featurize, featurize_many
from .optim import AdamWState, TrainConfig, adamw_step

log = logging.getLogger(__name__)

MODEL_FORMAT = "classifier/1"


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy(weights, bias, X, y, sample_weight=None):
    """Mean cross-entropy and its gradients w.r.t. ``weights`` (L x V) and ``bias`` (L).

    ``X`` is an (n x V) dense or sparse matrix, ``y`` integer class indices.
    With ``sample_weight`` the mean is weighted and normalized by the weight sum.
    """
    n = X.shape[0]
    logits = np.asarray(X @ weights.T) + bias
    z = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(z).sum(axis=1))
    log_p = z - log_norm[:, None]
    sw = np.ones(n) if sample_weight is None else np.asarray(sample_weight, dtype=float)
    total = sw.sum()
    loss = float(-(sw * log_p[np.arange(n), y]).sum() / total)
    delta = np.exp(log_p)
    delta[np.arange(n), y] -= 1.0
    delta *= (sw / total)[:, None]
    grad_w = np.asarray((X.T @ delta).T)
    grad_b = delta.sum(axis=0)
    return loss, grad_w, grad_b


@dataclass
class ClassifierModel:
    feature_model: FeatureModel
    weights: np.ndarray
    bias: np.ndarray
    labels: tuple[Label, ...]
    training_log: list = field(default_factory=list)
    best_step: int = 0
    config: TrainConfig | None = None
    warnings: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.weights.shape[0] != len(self.labels) or self.bias.shape != (len(self.labels),):
            raise TrainingError("weight rows and bias length must equal the label count")
        if self.weights.shape[1] != self.feature_model.size:
            raise TrainingError("weight columns must equal the feature vocabulary size")

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "labels": [label.value for label in self.labels],
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
            "training_log": [{"step": s, "eval_loss": loss} for s, loss in self.training_log],
            "best_step": self.best_step,
            "config": self.config.to_dict() if self.config else None,
            "warnings": list(self.warnings),
            "meta": self.meta,
            "feature_model": self.feature_model.to_dict(),
        }

    @classmethod
    def from_dict(cls, data) -> "ClassifierModel":
        if data.get("format") != MODEL_FORMAT:
            raise ModelFormatError(f"unsupported classifier format {data.get('format')!r}")
        try:
            return cls(
                feature_model=FeatureModel.from_dict(data["feature_model"]),
                weights=np.asarray(data["weights"], dtype=float).reshape(len(data["labels"]), -1),
                bias=np.asarray(data["bias"], dtype=float),
                labels=tuple(Label(x) for x in data["labels"]),
                training_log=[(int(r["step"]), float(r["eval_loss"])) for r in data["training_log"]],
                best_step=int(data["best_step"]),
                config=TrainConfig.from_mapping(data["config"]) if data.get("config") else None,
                warnings=list(data.get("warnings", [])),
                meta=dict(data.get("meta", {})),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ModelFormatError(f"corrupt classifier model: {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), ensure_ascii=False) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "ClassifierModel":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ModelFormatError(f"cannot read classifier model {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ModelFormatError(f"{path}: not a classifier model")
        return cls.from_dict(data)


def _label_set(examples) -> tuple[Label, ...]:
    present = set()
    for ex in examples:
        present.update(ex.language.labels)
    return tuple(label for label in LABEL_ORDER if label in present)


def train_classifier(
    split: DatasetSplit,
    fm: FeatureModel,
    config: TrainConfig = TrainConfig(),
    labels: Sequence[Label] | None = None,
    feature_cache: dict | None = None,
) -> ClassifierModel:
    """Mini-batch AdamW on mean cross-entropy from zero initialization.

    Validation loss is recorded every ``eval_every`` steps and after the last
    step; the parameters with the lowest recorded loss are returned.
    """
    if not split.train or not split.validation:
        raise TrainingError("train and validation parts must be nonempty")
    labels = tuple(labels) if labels is not None else _label_set(split.train + split.validation)
    position = {label: i for i, label in enumerate(labels)}
    for ex in split.train + split.validation:
        if ex.label not in position:
            raise TrainingError(f"label {ex.label.value} is outside the model label set")

    X_train = featurize_many([ex.text for ex in split.train], fm, feature_cache)
    y_train = np.array([position[ex.label] for ex in split.train])
    X_val = featurize_many([ex.text for ex in split.validation], fm, feature_cache)
    y_val = np.array([position[ex.label] for ex in split.validation])

    sample_weight = None
    if config.class_weights:
        counts = np.bincount(y_train, minlength=len(labels)).astype(float)
        per_class = np.where(counts > 0, len(y_train) / (len(labels) * np.maximum(counts, 1)), 0.0)
        sample_weight = per_class[y_train]

    weights = np.zeros((len(labels), fm.size))
    bias = np.zeros(len(labels))
    state = AdamWState.zeros_like([weights, bias])

    n = X_train.shape[0]
    steps_per_epoch = math.ceil(n / config.batch_size)
    total_steps = config.epochs * steps_per_epoch
    warnings = []
    if config.eval_every > total_steps:
        msg = f"eval_every={config.eval_every} exceeds total steps {total_steps}; evaluating once at the end"
        log.warning(msg)
        warnings.append(msg)

    rng = np.random.default_rng(config.seed)
    training_log = []
    best = (math.inf, 0, weights, bias)
    step = 0
    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            sw = None if sample_weight is None else sample_weight[batch]
            _, gw, gb = cross_entropy(weights, bias, X_train[batch], y_train[batch], sw)
            (weights, bias), state = adamw_step([weights, bias], [gw, gb], state, config)
            step += 1
            if step % config.eval_every == 0 or step == total_steps:
                val_loss, _, _ = cross_entropy(weights, bias, X_val, y_val)
                training_log.append((step, val_loss))
                if val_loss < best[0]:
                    best = (val_loss, step, weights, bias)

    _, best_step, weights, bias = best
    return ClassifierModel(fm, weights, bias, labels, training_log, best_step, config, warnings)


@dataclass(frozen=True)
class Prediction:
    label: Label
    probabilities: dict
    oov: bool


def predict_proba_matrix(model: ClassifierModel, X) -> np.ndarray:
    return softmax(np.asarray(X @ model.weights.T) + model.bias)


def predict(model: ClassifierModel, text: str) -> Prediction:
    vec = featurize(text, model.feature_model)
    logits = model.bias.copy()
    if len(vec):
        logits += model.weights[:, list(vec.indices)] @ np.asarray(vec.weights)
    probs = softmax(logits)
    best = int(np.argmax(probs))
    return Prediction(model.labels[best], {lab: float(p) for lab, p in zip(model.labels, probs)}, oov=not len(vec))


def predict_many(model: ClassifierModel, texts: Sequence[str]) -> list[Label]:
    if not texts:
        return []
    probs = predict_proba_matrix(model, featurize_many(texts, model.feature_model))
    return [model.labels[i] for i in probs.argmax(axis=1)]

