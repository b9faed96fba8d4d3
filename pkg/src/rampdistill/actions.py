"""Discrete high-level action set shared by the simulator, teacher and students."""
from __future__ import annotations

from enum import IntEnum


class Action(IntEnum):
    """Semantic meta-actions; index order is load-bearing for tie-breaking."""

    SLOW_DOWN = 0
    CRUISE = 1
    SPEED_UP = 2
    CHANGE_LEFT = 3
    CHANGE_RIGHT = 4

    @property
    def token(self) -> str:
        """Lower-case wire token, e.g. ``slow_down``."""
        return self.name.lower()

    @classmethod
    def from_token(cls, token: str) -> "Action":
        """Parse a token case-insensitively, ignoring spaces and underscores."""
        key = token.strip().lower().replace(" ", "").replace("_", "")
        for action in cls:
            if action.name.lower().replace("_", "") == key:
                return action
        raise ValueError(f"unknown action token: {token!r}")


LANE_CHANGE_ACTIONS = (Action.CHANGE_LEFT, Action.CHANGE_RIGHT)
