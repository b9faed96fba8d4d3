"""Experiment configuration and the flat key = value config-file format.

The file format is one ``key = value`` pair per line; ``#`` starts a
comment.  Values parse as int, float, bool, or comma-separated lists
thereof, falling back to strings.  Keys mirror the ExperimentConfig
fields; unknown keys are rejected so typos fail loudly.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace

from ..sim.config import EnvConfig, RewardWeights, normalize_density
from ..teacher.config import TeacherConfig


@dataclass(frozen=True)
class ExperimentConfig:
    scenario_id: int = 1
    density: str = "easy"
    seeds: tuple[int, ...] = (101, 102, 103)
    episodes_teaching: int = 2000
    episodes_self: int = 18000
    teacher_backend: str = "oracle"  # oracle | llm

    # student hyperparameters
    gamma: float = 0.99
    lr: float = 5e-4
    lambda0: float = 1.0
    eps_smooth: float = 0.05
    hidden: tuple[int, ...] = (64, 64)
    critic_input: str = "joint"
    execute_teacher_actions: bool = True
    replay_steps: int = 16
    replay_batch: int = 128
    replay_lr: float = 3e-3
    replay_weight: float = 0.5
    replay_balance_frac: float = 0.0
    holdout_every: int = 0
    eval_interval: int = 200
    eval_episodes: int = 3

    # environment overrides
    time_limit: float = 40.0
    n_obs: int = 6
    obs_range: float = 250.0
    reward_collision: float = 200.0
    reward_speed: float = 1.0
    reward_headway: float = 4.0
    reward_merging: float = 4.0

    # teacher overrides
    horizon: int = 3
    priority_noise_std: float = TeacherConfig.priority_noise_std

    # llm backend
    llm_endpoint: str = ""
    llm_model: str = "gpt-4o"
    llm_mode: str = "live"  # live | record | replay
    session_store: str = ""

    def __post_init__(self) -> None:
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        normalize_density(self.density)
        if self.teacher_backend not in ("oracle", "llm"):
            raise ValueError("teacher_backend must be 'oracle' or 'llm'")

    def env_config(self) -> EnvConfig:
        return EnvConfig(
            scenario_id=self.scenario_id,
            density=normalize_density(self.density),
            time_limit=self.time_limit,
            n_obs=self.n_obs,
            obs_range=self.obs_range,
            rewards=RewardWeights(
                collision=self.reward_collision,
                speed=self.reward_speed,
                headway=self.reward_headway,
                merging=self.reward_merging,
            ),
        )

    def teacher_config(self) -> TeacherConfig:
        return TeacherConfig(
            horizon=self.horizon, priority_noise_std=self.priority_noise_std
        )


def _parse_scalar(text: str):
    text = text.strip()
    lowered = text.lower()
    if lowered in ("true", "yes", "on"):
        return True
    if lowered in ("false", "no", "off"):
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_config_text(text: str) -> dict:
    """Parse the key = value format into a plain dict."""
    values: dict = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {line_no}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if "," in value:
            values[key] = tuple(_parse_scalar(item) for item in value.split(",") if item.strip())
        else:
            values[key] = _parse_scalar(value)
    return values


def experiment_from_dict(values: dict) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ValueError(f"unknown config keys: {unknown}")
    coerced = dict(values)
    for key in ("seeds", "hidden"):
        if key in coerced and isinstance(coerced[key], (int, float)):
            coerced[key] = (int(coerced[key]),)
        elif key in coerced:
            coerced[key] = tuple(int(v) for v in coerced[key])
    return ExperimentConfig(**coerced)


def load_experiment_config(path: str, overrides: dict | None = None) -> ExperimentConfig:
    with open(path) as fh:
        values = parse_config_text(fh.read())
    values.update(overrides or {})
    return experiment_from_dict(values)


def config_to_text(cfg: ExperimentConfig) -> str:
    lines = []
    for key, value in asdict(cfg).items():
        if isinstance(value, (tuple, list)):
            value = ", ".join(str(v) for v in value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
