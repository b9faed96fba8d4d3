"""Adaptive-RMS parameter updates with global-norm gradient clipping."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .nets import MlpGrads, MlpParams


def clip_global_norm(grads: MlpGrads, max_norm: float) -> float:
    """Scale gradients in place so their global L2 norm is at most max_norm."""
    norm = float(np.sqrt(sum(float((a * a).sum()) for a in grads.weights + grads.biases)))
    if max_norm > 0 and norm > max_norm:
        grads.scale(max_norm / norm)
    return norm


@dataclass
class RmsProp:
    """Root-mean-square propagation; decay and epsilon follow the run config."""

    lr: float = 5e-4
    decay: float = 0.99
    eps: float = 1e-5
    cache_w: list[np.ndarray] = field(default_factory=list)
    cache_b: list[np.ndarray] = field(default_factory=list)

    def step(self, params: MlpParams, grads: MlpGrads) -> None:
        if not self.cache_w:
            self.cache_w = [np.zeros_like(w) for w in params.weights]
            self.cache_b = [np.zeros_like(b) for b in params.biases]
        for w, g, c in zip(params.weights, grads.weights, self.cache_w):
            c *= self.decay
            c += (1.0 - self.decay) * g * g
            w -= self.lr * g / (np.sqrt(c) + self.eps)
        for b, g, c in zip(params.biases, grads.biases, self.cache_b):
            c *= self.decay
            c += (1.0 - self.decay) * g * g
            b -= self.lr * g / (np.sqrt(c) + self.eps)

    def state_dict(self) -> dict:
        return {
            "cache_w": [c.tolist() for c in self.cache_w],
            "cache_b": [c.tolist() for c in self.cache_b],
        }

    def load_state_dict(self, state: dict) -> None:
        self.cache_w = [np.array(c, dtype=float) for c in state["cache_w"]]
        self.cache_b = [np.array(c, dtype=float) for c in state["cache_b"]]
