"""Actor and critic objectives with analytic gradients.

The actor minimizes  mean[-log pi(a|s) * A]  plus, while distilling,
lambda * mean KL(teacher || student).  Both terms differentiate cleanly
through the softmax: the policy-gradient part yields A * (p - onehot_a)
on the logits and the KL part yields lambda * (p - teacher).  When
``lam == 0`` the KL path is skipped entirely so the update is bitwise
identical to the plain actor-critic one.
"""
from __future__ import annotations

import numpy as np

from .nets import MlpGrads, MlpParams, mlp_backward, mlp_forward, softmax

N_ACTIONS = 5
PROB_FLOOR = 1e-8


def advantage(
    reward: float | np.ndarray,
    value: float | np.ndarray,
    next_value: float | np.ndarray,
    gamma: float,
    done: bool | np.ndarray,
) -> float | np.ndarray:
    """One-step advantage r + gamma * V(s') * (1 - done) - V(s)."""
    done_mask = np.asarray(done, dtype=float)
    return reward + gamma * np.asarray(next_value) * (1.0 - done_mask) - np.asarray(value)


def teacher_distribution(action_idx: int, eps_smooth: float = 0.05) -> np.ndarray:
    """Smoothed one-hot over the expert action so the KL stays finite."""
    if not 0.0 <= eps_smooth < 0.5:
        raise ValueError("eps_smooth must be in [0, 0.5)")
    probs = np.full(N_ACTIONS, eps_smooth / (N_ACTIONS - 1))
    probs[action_idx] = 1.0 - eps_smooth
    return probs


def kl_divergence(p_teacher: np.ndarray, p_student: np.ndarray) -> float | np.ndarray:
    """KL(teacher || student) with the student floored away from zero.

    Accepts single distributions or row-wise batches.
    """
    t = np.asarray(p_teacher, dtype=float)
    s = np.clip(np.asarray(p_student, dtype=float), PROB_FLOOR, None)
    ratio = np.where(t > 0, t / s, 1.0)
    terms = np.where(t > 0, t * np.log(ratio), 0.0)
    return terms.sum(axis=-1)


def actor_loss_and_grads(
    params: MlpParams,
    obs: np.ndarray,
    actions: np.ndarray,
    advantages: np.ndarray,
    teacher_probs: np.ndarray | None = None,
    lam: float = 0.0,
) -> tuple[float, MlpGrads]:
    """Distillation-regularized policy-gradient loss over one batch.

    Advantages are treated as constants.  ``teacher_probs`` rows are only
    consulted when ``lam`` is non-zero.
    """
    obs = np.atleast_2d(np.asarray(obs, dtype=float))
    actions = np.asarray(actions, dtype=int)
    advantages = np.asarray(advantages, dtype=float)
    if not np.isfinite(advantages).all():
        raise ValueError("non-finite advantage in actor batch")
    batch = obs.shape[0]

    logits, cache = mlp_forward(params, obs)
    probs = softmax(logits)
    rows = np.arange(batch)
    log_p_a = np.log(np.clip(probs[rows, actions], PROB_FLOOR, None))
    loss = float(np.mean(-log_p_a * advantages))

    onehot = np.zeros_like(probs)
    onehot[rows, actions] = 1.0
    grad_logits = advantages[:, None] * (probs - onehot)
    if lam != 0.0 and teacher_probs is not None:
        t = np.atleast_2d(np.asarray(teacher_probs, dtype=float))
        loss += lam * float(np.mean(kl_divergence(t, probs)))
        grad_logits = grad_logits + lam * (probs - t)
    grad_logits /= batch
    return loss, mlp_backward(params, cache, grad_logits)


def critic_loss_and_grads(
    params: MlpParams, obs: np.ndarray, returns: np.ndarray
) -> tuple[float, MlpGrads]:
    """Mean squared error between V(s) and the empirical return."""
    obs = np.atleast_2d(np.asarray(obs, dtype=float))
    returns = np.asarray(returns, dtype=float)
    values, cache = mlp_forward(params, obs)
    residual = values[:, 0] - returns
    loss = float(np.mean(residual**2))
    grad_out = (2.0 * residual / residual.size)[:, None]
    return loss, mlp_backward(params, cache, grad_out)


def discounted_returns(rewards: np.ndarray, gamma: float) -> np.ndarray:
    """Within-episode discounted cumulative return for each step."""
    out = np.empty(len(rewards), dtype=float)
    acc = 0.0
    for i in range(len(rewards) - 1, -1, -1):
        acc = rewards[i] + gamma * acc
        out[i] = acc
    return out
