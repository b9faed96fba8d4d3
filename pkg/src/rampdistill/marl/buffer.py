"""Transitions and the bounded expert demonstration buffer."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Transition:
    """One step as seen by one agent.

    ``action`` is what was executed in the environment; ``teacher_action``
    carries the expert label during distillation (equal to ``action`` when
    the teacher was driving).  ``joint_obs`` feeds the centralized critic.
    """

    obs: np.ndarray
    action: int
    reward: float
    next_obs: np.ndarray
    done: bool
    joint_obs: np.ndarray
    next_joint_obs: np.ndarray
    teacher_action: int | None = None
    holdout: bool = False


class ExpertBuffer:
    """FIFO store of teacher-labelled transitions with a hard capacity."""

    def __init__(self, capacity: int = 50_000):
        if capacity <= 0:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._items: deque[Transition] = deque(maxlen=capacity)

    def append(self, transition: Transition) -> None:
        self._items.append(transition)

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, index: int) -> Transition:
        return self._items[index]

    def __iter__(self):
        return iter(self._items)

    def training_items(self) -> list[Transition]:
        return [t for t in self._items if not t.holdout]

    def holdout_items(self) -> list[Transition]:
        return [t for t in self._items if t.holdout]

    def sample(self, rng: np.random.Generator, batch_size: int) -> list[Transition]:
        pool = self.training_items()
        if not pool:
            return []
        idx = rng.integers(0, len(pool), size=min(batch_size, len(pool)))
        return [pool[i] for i in idx]

    def sample_balanced(self, rng: np.random.Generator, batch_size: int) -> list[Transition]:
        """Sample with teacher-action classes equalized.

        Plain uniform sampling lets the majority action (cruise) drown out the
        rare safety-critical ones, so each draw first picks a class, then a
        member; classes are keyed by the teacher action when present.
        """
        pools: dict[int, list[Transition]] = {}
        for t in self.training_items():
            label = t.teacher_action if t.teacher_action is not None else t.action
            pools.setdefault(label, []).append(t)
        if not pools:
            return []
        classes = sorted(pools)
        class_picks = rng.integers(0, len(classes), size=batch_size)
        batch = []
        for c in class_picks:
            pool = pools[classes[int(c)]]
            batch.append(pool[int(rng.integers(0, len(pool)))])
        return batch


class SharedBufferView:
    """Read-only union over several agents' buffers.

    The teacher's demonstrations form one shared pool of (observation,
    expert action) evidence: rarely-spawned agents distill from everyone's
    demonstrations even though their own rollout history is thin.
    """

    def __init__(self, buffers: list[ExpertBuffer]):
        self.buffers = buffers

    def __len__(self) -> int:
        return sum(len(b) for b in self.buffers)

    def training_items(self) -> list[Transition]:
        items: list[Transition] = []
        for buffer in self.buffers:
            items.extend(buffer.training_items())
        return items

    def sample(self, rng: np.random.Generator, batch_size: int) -> list[Transition]:
        pool = self.training_items()
        if not pool:
            return []
        idx = rng.integers(0, len(pool), size=min(batch_size, len(pool)))
        return [pool[i] for i in idx]

    def sample_balanced(self, rng: np.random.Generator, batch_size: int) -> list[Transition]:
        pools: dict[int, list[Transition]] = {}
        for t in self.training_items():
            label = t.teacher_action if t.teacher_action is not None else t.action
            pools.setdefault(label, []).append(t)
        if not pools:
            return []
        classes = sorted(pools)
        class_picks = rng.integers(0, len(classes), size=batch_size)
        batch = []
        for c in class_picks:
            pool = pools[classes[int(c)]]
            batch.append(pool[int(rng.integers(0, len(pool)))])
        return batch
