"""AdamW with decoupled weight decay and bias-corrected moments."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Sequence

import numpy as np

from ..errors import ConfigError, TrainingError


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 4
    eval_every: int = 500
    batch_size: int = 32
    learning_rate: float = 1e-2
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    weight_decay: float = 0.01
    seed: int = 0
    class_weights: bool = False

    def __post_init__(self):
        for name in ("epochs", "eval_every", "batch_size"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if self.learning_rate <= 0 or self.epsilon <= 0 or self.weight_decay < 0:
            raise ConfigError("learning_rate and epsilon must be positive, weight_decay non-negative")
        if not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise ConfigError("beta1 and beta2 must lie in (0, 1)")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")

    @classmethod
    def from_mapping(cls, data) -> "TrainConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown training options: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class AdamWState:
    m: list = field(default_factory=list)
    v: list = field(default_factory=list)
    t: int = 0

    @classmethod
    def zeros_like(cls, params: Sequence[np.ndarray]) -> "AdamWState":
        return cls([np.zeros_like(p, dtype=float) for p in params],
                   [np.zeros_like(p, dtype=float) for p in params], 0)


def adamw_step(params, grads, state: AdamWState, config: TrainConfig):
    """One update. Returns ``(new_params, new_state)`` and leaves the inputs untouched.

    ``theta <- theta - lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * theta)``
    """
    params = [np.asarray(p, dtype=float) for p in params]
    grads = [np.asarray(g, dtype=float) for g in grads]
    if len(params) != len(grads):
        raise TrainingError(f"got {len(params)} parameters but {len(grads)} gradients")
    if not state.m:
        state = AdamWState.zeros_like(params)
    if len(state.m) != len(params):
        raise TrainingError("optimizer state does not match the parameter list")
    for p, g, m in zip(params, grads, state.m):
        if p.shape != g.shape or p.shape != m.shape:
            raise TrainingError(f"shape mismatch: param {p.shape}, grad {g.shape}, state {m.shape}")

    b1, b2 = config.beta1, config.beta2
    lr, eps, wd = config.learning_rate, config.epsilon, config.weight_decay
    t = state.t + 1
    bc1 = 1.0 - b1**t
    bc2 = 1.0 - b2**t
    new_params, new_m, new_v = [], [], []
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * (g * g)
        m_hat = m / bc1
        v_hat = v / bc2
        new_params.append(p - lr * (m_hat / (np.sqrt(v_hat) + eps) + wd * p))
        new_m.append(m)
        new_v.append(v)
    return new_params, AdamWState(new_m, new_v, t)
