"""Small tanh MLPs with hand-written reverse-mode gradients.

Everything is float64 numpy; the backward pass is exact, which the test
suite verifies against central finite differences.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class MlpParams:
    """Weight/bias stacks for a tanh-hidden, linear-head MLP."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]

    @property
    def sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0],) + tuple(w.shape[1] for w in self.weights)

    def copy(self) -> "MlpParams":
        return MlpParams([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def flat(self) -> np.ndarray:
        return np.concatenate([a.ravel() for a in self.weights + self.biases])

    def set_flat(self, vector: np.ndarray) -> None:
        offset = 0
        for arr in self.weights + self.biases:
            arr[...] = vector[offset : offset + arr.size].reshape(arr.shape)
            offset += arr.size
        if offset != vector.size:
            raise ValueError("flat vector size does not match parameter count")


@dataclass
class MlpGrads:
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def flat(self) -> np.ndarray:
        return np.concatenate([a.ravel() for a in self.weights + self.biases])

    def scale(self, factor: float) -> None:
        for arr in self.weights + self.biases:
            arr *= factor


def init_mlp(sizes: tuple[int, ...], rng: np.random.Generator) -> MlpParams:
    """Glorot-uniform weights, zero biases."""
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights, biases)


def mlp_forward(params: MlpParams, x: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Forward pass; returns the output and the activation cache for backward.

    Accepts a single vector or a batch (B, in); hidden layers are tanh, the
    head is linear.
    """
    h = np.atleast_2d(np.asarray(x, dtype=float))
    cache = [h]
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = h @ w + b
        h = z if i == last else np.tanh(z)
        cache.append(h)
    return h, cache


def mlp_backward(params: MlpParams, cache: list[np.ndarray], grad_out: np.ndarray) -> MlpGrads:
    """Exact gradients of a scalar loss given d(loss)/d(output)."""
    grad = np.atleast_2d(np.asarray(grad_out, dtype=float))
    d_weights = [np.empty_like(w) for w in params.weights]
    d_biases = [np.empty_like(b) for b in params.biases]
    last = len(params.weights) - 1
    for i in range(last, -1, -1):
        h_in = cache[i]
        if i != last:
            grad = grad * (1.0 - cache[i + 1] ** 2)  # through tanh
        d_weights[i] = h_in.T @ grad
        d_biases[i] = grad.sum(axis=0)
        if i > 0:
            grad = grad @ params.weights[i].T
    return MlpGrads(d_weights, d_biases)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Stable softmax along the last axis."""
    z = np.asarray(logits, dtype=float)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def forward_actor(params: MlpParams, obs: np.ndarray) -> np.ndarray:
    """Action probabilities for one observation or a batch."""
    logits, _ = mlp_forward(params, obs)
    probs = softmax(logits)
    return probs[0] if np.asarray(obs).ndim == 1 else probs


def forward_critic(params: MlpParams, obs: np.ndarray) -> np.ndarray | float:
    """State value(s) for one joint observation or a batch."""
    values, _ = mlp_forward(params, obs)
    return float(values[0, 0]) if np.asarray(obs).ndim == 1 else values[:, 0]
