"""Tunables for the expert teacher."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class TeacherConfig:
    # trajectory prediction
    horizon: int = 3  # decision steps rolled out by the safety checker

    # conflict risk grading
    risk_high_delta: float = 2.0  # s, ttcp difference below which risk is high
    risk_low_delta: float = 4.0   # s, below which risk is at least low
    risk_ttcp_max: float = 10.0   # s, both vehicles must be this close in time for high
    ttcp_speed_floor: float = 0.1

    # priority score
    alpha_merge: float = 1.0
    alpha_end: float = 1.0
    alpha_headway: float = 1.0
    priority_noise_std: float = math.sqrt(1e-3)
    headway_score_cap: float = 5.0
    time_headway: float = 1.2

    # oracle yield rule
    yield_settled_margin: float = 1.0  # s; stop yielding once arriving this much later

    # intention inference
    merge_intent_fraction: float = 0.5
    lateral_speed_threshold: float = 0.3
    accel_deadband: float = 0.2

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError("prediction horizon must be >= 1")
        if min(self.alpha_merge, self.alpha_end, self.alpha_headway) < 0:
            raise ValueError("priority weights must be non-negative")
