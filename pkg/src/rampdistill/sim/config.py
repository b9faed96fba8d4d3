"""Environment configuration: densities, controller gains, reward weights."""
from __future__ import annotations

from dataclasses import dataclass, field

from .driver_models import IdmParams, MobilParams

DENSITY_RANGES: dict[str, tuple[int, int]] = {
    "easy": (2, 4),
    "medium": (4, 6),
    "hard": (6, 8),
}

_DENSITY_ALIASES = {"simple": "easy"}


def normalize_density(name: str) -> str:
    key = name.strip().lower()
    key = _DENSITY_ALIASES.get(key, key)
    if key not in DENSITY_RANGES:
        raise ValueError(f"unknown density {name!r}; expected easy|medium|hard")
    return key


def max_vehicles(density: str) -> int:
    return DENSITY_RANGES[normalize_density(density)][1]


@dataclass(frozen=True)
class RewardWeights:
    """Non-negative weights for the collision/speed/headway/merging terms."""

    collision: float = 200.0
    speed: float = 1.0
    headway: float = 4.0
    merging: float = 4.0

    def __post_init__(self) -> None:
        if min(self.collision, self.speed, self.headway, self.merging) < 0:
            raise ValueError("reward weights must be non-negative")

    @property
    def total(self) -> float:
        return self.collision + self.speed + self.headway + self.merging


@dataclass(frozen=True)
class EnvConfig:
    scenario_id: int = 1
    density: str = "easy"

    # timing
    dt: float = 0.1
    decision_period: float = 1.0
    time_limit: float = 40.0

    # observation
    n_obs: int = 6
    obs_range: float = 250.0

    # low-level controller
    v_max: float = 32.0
    speed_step: float = 5.0
    speed_gain: float = 2.0
    accel_limit: float = 4.0
    lateral_gain: float = 0.6
    lateral_speed_max: float = 2.5
    heading_gain: float = 3.0

    # spawning
    main_spawn_range: tuple[float, float] = (0.0, 180.0)
    ramp_spawn_range: tuple[float, float] = (0.0, 150.0)
    main_speed_range: tuple[float, float] = (22.0, 28.0)
    ramp_speed_range: tuple[float, float] = (15.0, 22.0)
    min_spacing: float = 15.0
    cav_ratio: float = 0.5
    ensure_ramp_vehicle: bool = True
    max_spawn_attempts: int = 100

    # reward shaping
    rewards: RewardWeights = field(default_factory=RewardWeights)
    time_headway: float = 1.2

    # human drivers
    idm: IdmParams = field(default_factory=IdmParams)
    mobil: MobilParams = field(default_factory=MobilParams)
    hv_lane_change_into_ramp: bool = False

    def __post_init__(self) -> None:
        normalize_density(self.density)
        if self.scenario_id not in (1, 2):
            raise ValueError(f"unknown scenario id: {self.scenario_id}")
        if self.decision_period < self.dt:
            raise ValueError("decision period shorter than one sub-step")

    @property
    def substeps(self) -> int:
        return max(1, round(self.decision_period / self.dt))

    @property
    def obs_dim(self) -> int:
        return self.n_obs * 6
