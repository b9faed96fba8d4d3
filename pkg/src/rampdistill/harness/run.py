"""Experiment orchestration: seeded training runs, evaluation, cross-validation.

Per-seed artifacts land under ``<out>/seed<k>/`` (rolling checkpoint and
curve CSV); the seed-mean curve file joins them at the top level.  All
outputs are byte-deterministic for a fixed config.
"""
from __future__ import annotations

import csv
import hashlib
import json
import os

import numpy as np

from ..actions import Action
from ..llm.client import LlmConfig, LlmPlanner, http_transport, make_scene_executor
from ..llm.recording import MODE_LIVE, SessionStore, wrap_transport
from ..marl.trainer import (
    CURVE_COLUMNS,
    TrainConfig,
    agents_from_checkpoint,
    evaluate_policies,
    load_checkpoint,
    train,
)
from ..sim.config import EnvConfig, normalize_density
from ..sim.env import MergeEnv
from ..sim.snapshot import state_to_dict
from ..teacher.agent import TeacherAgent
from .config import ExperimentConfig
from .report import EvalReport, emit_report

DEFAULT_EVAL_EPISODES = 20


def build_teacher(cfg: ExperimentConfig, env_cfg: EnvConfig | None = None) -> TeacherAgent:
    env_cfg = env_cfg or cfg.env_config()
    llm_planner = None
    if cfg.teacher_backend == "llm":
        llm_cfg = LlmConfig(endpoint=cfg.llm_endpoint, model=cfg.llm_model)
        store = SessionStore(cfg.session_store) if cfg.session_store else None
        inner = http_transport(llm_cfg) if cfg.llm_mode != "replay" else None
        transport = wrap_transport(cfg.llm_mode or MODE_LIVE, inner=inner, store=store)
        llm_planner = LlmPlanner(
            transport=transport, cfg=llm_cfg, executor_factory=make_scene_executor
        )
    return TeacherAgent(
        env_cfg=env_cfg,
        cfg=cfg.teacher_config(),
        backend=cfg.teacher_backend,
        llm_planner=llm_planner,
    )


def train_config_for_seed(cfg: ExperimentConfig, seed: int) -> TrainConfig:
    return TrainConfig(
        episodes_teaching=cfg.episodes_teaching,
        episodes_self=cfg.episodes_self,
        seed=seed,
        gamma=cfg.gamma,
        lr=cfg.lr,
        lambda0=cfg.lambda0,
        eps_smooth=cfg.eps_smooth,
        hidden=cfg.hidden,
        critic_input=cfg.critic_input,
        execute_teacher_actions=cfg.execute_teacher_actions,
        replay_steps=cfg.replay_steps,
        replay_batch=cfg.replay_batch,
        replay_lr=cfg.replay_lr,
        replay_weight=cfg.replay_weight,
        replay_balance_frac=cfg.replay_balance_frac,
        holdout_every=cfg.holdout_every,
        eval_interval=cfg.eval_interval,
        eval_episodes=cfg.eval_episodes,
    )


def run_training(cfg: ExperimentConfig, out_dir: str, resume: bool = True) -> dict:
    """Train every seed, persist checkpoints/curves, write the seed-mean curve."""
    os.makedirs(out_dir, exist_ok=True)
    env_cfg = cfg.env_config()
    curve_rows_by_seed: dict[int, list[dict]] = {}
    checkpoints: dict[int, str] = {}
    for seed in cfg.seeds:
        seed_dir = os.path.join(out_dir, f"seed{seed}")
        teacher = build_teacher(cfg, env_cfg) if cfg.episodes_teaching > 0 else None
        result = train(
            train_config_for_seed(cfg, seed),
            env_cfg,
            teacher=teacher,
            out_dir=seed_dir,
            resume=resume,
        )
        curve_rows_by_seed[seed] = result.curve_rows
        checkpoints[seed] = result.checkpoint_path
    mean_path = os.path.join(out_dir, "curve_mean.csv")
    _write_seed_mean_curve(curve_rows_by_seed, mean_path)
    return {
        "checkpoints": checkpoints,
        "curves": curve_rows_by_seed,
        "curve_mean_path": mean_path,
        "out_dir": out_dir,
    }


def _write_seed_mean_curve(curve_rows_by_seed: dict[int, list[dict]], path: str) -> None:
    by_episode: dict[int, list[dict]] = {}
    for rows in curve_rows_by_seed.values():
        for row in rows:
            if row["agent"] == "mean":
                by_episode.setdefault(row["episode"], []).append(row)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CURVE_COLUMNS)
        writer.writeheader()
        for episode in sorted(by_episode):
            rows = by_episode[episode]
            pets = [r["avg_pet"] for r in rows if r["avg_pet"] is not None]
            rewards = [r["eval_reward"] for r in rows if r["eval_reward"] is not None]
            writer.writerow(
                {
                    "episode": episode,
                    "agent": "seed_mean",
                    "eval_reward": sum(rewards) / len(rewards) if rewards else "",
                    "collision_rate": sum(r["collision_rate"] for r in rows) / len(rows),
                    "avg_speed": sum(r["avg_speed"] for r in rows) / len(rows),
                    "avg_pet": sum(pets) / len(pets) if pets else "",
                    "lambda": rows[0]["lambda"],
                }
            )


def evaluate(
    checkpoint_path: str,
    scenario_id: int | None = None,
    density: str | None = None,
    n_episodes: int = DEFAULT_EVAL_EPISODES,
    seed: int = 0,
    env_cfg: EnvConfig | None = None,
    record_path: str | None = None,
) -> EvalReport:
    """Greedy evaluation of a stored checkpoint on a (scenario, density) cell."""
    payload = load_checkpoint(checkpoint_path)
    agents = agents_from_checkpoint(payload)
    original_density = payload["density"]
    scenario = scenario_id if scenario_id is not None else payload["scenario_id"]
    applied = normalize_density(density) if density else original_density
    if env_cfg is None:
        env_cfg = EnvConfig(scenario_id=scenario, density=applied)
    if env_cfg.obs_dim != payload["obs_dim"]:
        raise ValueError(
            f"checkpoint observation dim {payload['obs_dim']} does not match env {env_cfg.obs_dim}"
        )
    record_steps: list | None = [] if record_path else None
    metrics = evaluate_policies(
        env_cfg,
        agents,
        n_episodes,
        seed=seed,
        critic_input=payload.get("critic_input", "joint"),
        record_steps=record_steps,
    )
    if record_path:
        _write_episode_record(record_path, env_cfg, record_steps)
    return EvalReport(
        scenario=scenario,
        original_density=original_density,
        applied_density=applied,
        seed=seed,
        eval_reward=metrics["eval_reward"],
        collision_rate=metrics["collision_rate"],
        avg_speed=metrics["avg_speed"],
        avg_pet=metrics["avg_pet"],
        success_rate=metrics["success_rate"],
        n_episodes=n_episodes,
    )


def cross_validate(
    checkpoint_path: str,
    applied_density: str,
    scenario_id: int | None = None,
    n_episodes: int = DEFAULT_EVAL_EPISODES,
    seed: int = 0,
) -> EvalReport:
    """Evaluate a checkpoint under a density it was not trained on."""
    return evaluate(
        checkpoint_path,
        scenario_id=scenario_id,
        density=applied_density,
        n_episodes=n_episodes,
        seed=seed,
    )


# ------------------------------------------------------------------ replay


def _state_digest(state, scenario_id: int) -> str:
    blob = json.dumps(state_to_dict(state, scenario_id), sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _write_episode_record(path: str, env_cfg: EnvConfig, episodes: list) -> None:
    env = MergeEnv(env_cfg)
    with open(path, "w") as fh:
        header = {
            "format": "episode-v1",
            "scenario_id": env_cfg.scenario_id,
            "density": env_cfg.density,
        }
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for episode in episodes:
            state, _ = env.reset(episode["seed"])
            digests = []
            for actions in episode["steps"]:
                env.step(state, {vid: Action(a) for vid, a in actions.items()})
                digests.append(_state_digest(state, env_cfg.scenario_id))
            fh.write(
                json.dumps(
                    {"seed": episode["seed"], "steps": episode["steps"], "digests": digests},
                    sort_keys=True,
                )
                + "\n"
            )


def verify_episode_record(path: str) -> dict:
    """Re-simulate a recorded run and check every per-step state digest."""
    with open(path) as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if not lines or lines[0].get("format") != "episode-v1":
        raise ValueError("not an episode-v1 record")
    header = lines[0]
    env = MergeEnv(EnvConfig(scenario_id=header["scenario_id"], density=header["density"]))
    episodes = steps = mismatches = 0
    for record in lines[1:]:
        state, _ = env.reset(record["seed"])
        episodes += 1
        for actions, expected in zip(record["steps"], record["digests"]):
            env.step(state, {vid: Action(a) for vid, a in actions.items()})
            steps += 1
            if _state_digest(state, header["scenario_id"]) != expected:
                mismatches += 1
    return {"episodes": episodes, "steps": steps, "mismatches": mismatches}
