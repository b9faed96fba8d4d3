"""Two-phase training: teacher-guided distillation, then self-learning.

Phase 1 (episodes 1..episodes_teaching) queries the teacher every step,
stores (o, a*, r, o') in the expert buffer and anneals the KL weight
linearly to zero; phase 2 is plain decentralized actor-critic with the
centralized critic.  Four independent RNG streams (episode seeds, action
sampling, replay minibatches, teacher noise) keep the lambda=0 run
bit-identical to the no-teacher baseline under a shared seed.
"""
from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field, replace

import numpy as np

from ..actions import Action
from ..sim.config import DENSITY_RANGES, EnvConfig, normalize_density
from ..sim.env import MergeEnv
from ..sim.metrics import compute_pet, episode_had_crash, episode_success
from .buffer import ExpertBuffer, SharedBufferView, Transition
from .losses import (
    N_ACTIONS,
    actor_loss_and_grads,
    advantage,
    critic_loss_and_grads,
    discounted_returns,
    teacher_distribution,
)
from .nets import MlpParams, forward_actor, init_mlp, mlp_forward
from .optim import RmsProp, clip_global_norm

CURVE_COLUMNS = ["episode", "agent", "eval_reward", "collision_rate", "avg_speed", "avg_pet", "lambda"]

CKPT_FORMAT = "rampdistill-ckpt-v1"


@dataclass(frozen=True)
class AnnealSchedule:
    """lambda(e) = lambda0 * max(0, 1 - e / teaching_episodes)."""

    lambda0: float = 1.0
    teaching_episodes: int = 2000

    def value(self, episode: int) -> float:
        if self.lambda0 == 0.0 or self.teaching_episodes <= 0:
            return 0.0
        return self.lambda0 * max(0.0, 1.0 - episode / self.teaching_episodes)


@dataclass(frozen=True)
class TrainConfig:
    episodes_teaching: int = 2000
    episodes_self: int = 18000
    seed: int = 0

    gamma: float = 0.99
    lr: float = 5e-4
    rms_decay: float = 0.99
    rms_eps: float = 1e-5
    grad_clip: float = 0.5
    hidden: tuple[int, ...] = (64, 64)
    critic_input: str = "joint"  # joint | local

    lambda0: float = 1.0
    eps_smooth: float = 0.05
    execute_teacher_actions: bool = True
    replay_steps: int = 16
    replay_batch: int = 128
    replay_lr: float = 3e-3  # replay passes use their own optimizer and step size
    replay_weight: float = 0.5  # KL coefficient of replay passes, relative to lambda0
    replay_balance_frac: float = 0.0  # share of each replay batch drawn class-balanced
    replay_obs_noise: float = 0.0  # std of Gaussian jitter on replayed observations
    consolidation_steps: int = 0  # extra buffer-only KL steps at the end of phase 1
    consolidation_lr: float = 1e-3
    buffer_capacity: int = 50_000
    holdout_every: int = 0  # mark ~1/k of stored teaching transitions held out (0 = off)

    eval_interval: int = 200
    eval_episodes: int = 3

    def __post_init__(self) -> None:
        if self.episodes_teaching < 0 or self.episodes_self < 0:
            raise ValueError("episode counts must be non-negative")
        if self.holdout_every < 0:
            raise ValueError("holdout_every must be non-negative")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must be in [0, 1]")
        if self.critic_input not in ("joint", "local"):
            raise ValueError("critic_input must be 'joint' or 'local'")

    @property
    def total_episodes(self) -> int:
        return self.episodes_teaching + self.episodes_self


@dataclass
class AgentNets:
    actor: MlpParams
    critic: MlpParams
    actor_opt: RmsProp
    critic_opt: RmsProp
    replay_opt: RmsProp


@dataclass
class TrainResult:
    agents: list[AgentNets]
    curve_rows: list[dict]
    buffers: list[ExpertBuffer]
    episodes_run: int
    n_agents: int
    obs_dim: int
    joint_dim: int
    checkpoint_path: str | None = None


def agent_index(cav_id: str) -> int:
    return int(cav_id.removeprefix("cav"))


def build_agents(
    n_agents: int, obs_dim: int, joint_dim: int, cfg: TrainConfig, rng: np.random.Generator
) -> list[AgentNets]:
    agents = []
    for _ in range(n_agents):
        actor = init_mlp((obs_dim, *cfg.hidden, N_ACTIONS), rng)
        critic = init_mlp((joint_dim, *cfg.hidden, 1), rng)
        agents.append(
            AgentNets(
                actor=actor,
                critic=critic,
                actor_opt=RmsProp(lr=cfg.lr, decay=cfg.rms_decay, eps=cfg.rms_eps),
                critic_opt=RmsProp(lr=cfg.lr, decay=cfg.rms_decay, eps=cfg.rms_eps),
                replay_opt=RmsProp(lr=cfg.replay_lr, decay=cfg.rms_decay, eps=cfg.rms_eps),
            )
        )
    return agents


def sample_action(probs: np.ndarray, rng: np.random.Generator) -> int:
    u = rng.random()
    cum = np.cumsum(probs)
    return int(min(np.searchsorted(cum, u, side="right"), N_ACTIONS - 1))


def greedy_action(probs: np.ndarray) -> int:
    return int(np.argmax(probs))


def _joint_obs(obs: dict[str, np.ndarray], n_agents: int, obs_dim: int) -> np.ndarray:
    joint = np.zeros(n_agents * obs_dim)
    for cav_id, mat in obs.items():
        idx = agent_index(cav_id)
        joint[idx * obs_dim : (idx + 1) * obs_dim] = mat.ravel()
    return joint


@dataclass
class _EpisodeData:
    transitions: list[list[Transition]]  # per agent
    total_reward: dict[int, float]


def _rollout(
    env: MergeEnv,
    agents: list[AgentNets],
    cfg: TrainConfig,
    episode_seed: int,
    teaching: bool,
    teacher,
    rng_policy: np.random.Generator,
    rng_teacher: np.random.Generator,
    rng_holdout: np.random.Generator | None = None,
) -> _EpisodeData:
    obs_dim = env.config.obs_dim
    n_agents = len(agents)
    state, obs = env.reset(episode_seed)
    per_agent: list[list[Transition]] = [[] for _ in range(n_agents)]
    totals: dict[int, float] = {}

    while True:
        live = sorted(v.vehicle_id for v in state.live_cavs())
        if not live:
            break
        joint_obs = _joint_obs(obs, n_agents, obs_dim)

        teacher_actions: dict[str, Action] = {}
        if teaching and teacher is not None:
            teacher_actions = teacher.decide(state, rng=rng_teacher).actions

        executed: dict[str, Action] = {}
        for cav_id in live:
            idx = agent_index(cav_id)
            if teaching and cfg.execute_teacher_actions and cav_id in teacher_actions:
                executed[cav_id] = teacher_actions[cav_id]
            else:
                probs = forward_actor(agents[idx].actor, obs[cav_id].ravel())
                executed[cav_id] = Action(sample_action(probs, rng_policy))

        result = env.step(state, executed)
        next_obs = result.observations
        next_joint = _joint_obs(
            {vid: m for vid, m in next_obs.items() if not state.vehicle(vid).done},
            n_agents,
            obs_dim,
        )
        for cav_id in live:
            idx = agent_index(cav_id)
            done = state.vehicle(cav_id).done or result.done
            held = bool(
                teaching
                and cfg.holdout_every > 0
                and rng_holdout is not None
                and rng_holdout.random() < 1.0 / cfg.holdout_every
            )
            per_agent[idx].append(
                Transition(
                    obs=obs[cav_id].ravel(),
                    action=int(executed[cav_id]),
                    reward=result.rewards[cav_id],
                    next_obs=next_obs[cav_id].ravel(),
                    done=done,
                    joint_obs=joint_obs,
                    next_joint_obs=next_joint,
                    teacher_action=(
                        int(teacher_actions[cav_id]) if cav_id in teacher_actions else None
                    ),
                    holdout=held,
                )
            )
            totals[idx] = totals.get(idx, 0.0) + result.rewards[cav_id]
        obs = {vid: m for vid, m in next_obs.items() if not state.vehicle(vid).done}
        if result.done:
            break
    return _EpisodeData(per_agent, totals)


def _critic_obs(cfg: TrainConfig, t: Transition) -> tuple[np.ndarray, np.ndarray]:
    if cfg.critic_input == "joint":
        return t.joint_obs, t.next_joint_obs
    return t.obs, t.next_obs


def _update_agent(
    nets: AgentNets, transitions: list[Transition], cfg: TrainConfig, lam: float
) -> None:
    if not transitions:
        return
    obs = np.stack([t.obs for t in transitions])
    actions = np.array([t.action for t in transitions], dtype=int)
    rewards = np.array([t.reward for t in transitions])
    dones = np.array([t.done for t in transitions], dtype=float)
    critic_now = np.stack([_critic_obs(cfg, t)[0] for t in transitions])
    critic_next = np.stack([_critic_obs(cfg, t)[1] for t in transitions])

    values, _ = mlp_forward(nets.critic, critic_now)
    next_values, _ = mlp_forward(nets.critic, critic_next)
    adv = advantage(rewards, values[:, 0], next_values[:, 0], cfg.gamma, dones)
    returns = discounted_returns(rewards, cfg.gamma)

    teacher_probs = None
    if lam != 0.0:
        teacher_probs = np.stack(
            [
                teacher_distribution(
                    t.teacher_action if t.teacher_action is not None else t.action,
                    cfg.eps_smooth,
                )
                for t in transitions
            ]
        )
    _, actor_grads = actor_loss_and_grads(nets.actor, obs, actions, adv, teacher_probs, lam)
    _, critic_grads = critic_loss_and_grads(nets.critic, critic_now, returns)
    clip_global_norm(actor_grads, cfg.grad_clip)
    clip_global_norm(critic_grads, cfg.grad_clip)
    nets.actor_opt.step(nets.actor, actor_grads)
    nets.critic_opt.step(nets.critic, critic_grads)


def _replay_distill(
    nets: AgentNets,
    buffer,
    cfg: TrainConfig,
    rng_replay: np.random.Generator,
    steps: int | None = None,
    opt: RmsProp | None = None,
) -> None:
    """Extra KL-only passes over sampled demonstrations.

    Weighted by ``lambda0 * replay_weight`` rather than the annealed
    lambda so late teaching episodes keep distilling; skipped entirely
    when lambda0 is zero, keeping the no-teacher reduction exact.  A small
    slice of each batch is class-balanced so rare yield/merge labels are
    not drowned out by cruising.
    """
    weight = cfg.lambda0 * cfg.replay_weight
    steps = cfg.replay_steps if steps is None else steps
    opt = nets.replay_opt if opt is None else opt
    if weight == 0.0 or steps <= 0 or len(buffer) == 0:
        return
    n_balanced = int(round(cfg.replay_batch * cfg.replay_balance_frac))
    for _ in range(steps):
        batch = buffer.sample(rng_replay, cfg.replay_batch - n_balanced)
        if n_balanced:
            batch = batch + buffer.sample_balanced(rng_replay, n_balanced)
        if not batch:
            return
        obs = np.stack([t.obs for t in batch])
        if cfg.replay_obs_noise > 0:
            obs = obs + rng_replay.normal(0.0, cfg.replay_obs_noise, size=obs.shape)
        labels = np.array(
            [t.teacher_action if t.teacher_action is not None else t.action for t in batch],
            dtype=int,
        )
        teacher_probs = np.stack([teacher_distribution(a, cfg.eps_smooth) for a in labels])
        zeros = np.zeros(len(batch))
        _, grads = actor_loss_and_grads(nets.actor, obs, labels, zeros, teacher_probs, weight)
        clip_global_norm(grads, cfg.grad_clip)
        opt.step(nets.actor, grads)


def evaluate_policies(
    env_cfg: EnvConfig,
    agents: list[AgentNets],
    n_episodes: int,
    seed: int,
    critic_input: str = "joint",
    record_steps: list | None = None,
) -> dict:
    """Greedy rollouts; returns the paper's metric set plus success rate."""
    env = MergeEnv(env_cfg)
    agent_returns: dict[int, list[float]] = {}
    episode_rewards = []
    crashes = 0
    successes = 0
    speeds = []
    pets = []
    for i in range(n_episodes):
        episode_seed = int(np.random.SeedSequence((seed, 9203, i)).generate_state(1)[0])
        state, obs = env.reset(episode_seed)
        totals: dict[int, float] = {}
        actions_log = []
        while True:
            live = sorted(v.vehicle_id for v in state.live_cavs())
            if not live:
                break
            joint = {}
            for cav_id in live:
                idx = agent_index(cav_id)
                if idx >= len(agents):
                    raise ValueError(
                        f"checkpoint supports {len(agents)} agents but CAV {cav_id} spawned"
                    )
                probs = forward_actor(agents[idx].actor, obs[cav_id].ravel())
                joint[cav_id] = Action(greedy_action(probs))
            actions_log.append({vid: int(a) for vid, a in joint.items()})
            result = env.step(state, joint)
            for cav_id in live:
                idx = agent_index(cav_id)
                totals[idx] = totals.get(idx, 0.0) + result.rewards[cav_id]
            speeds.extend(v.speed for v in state.live_cavs())
            obs = {vid: m for vid, m in result.observations.items() if not state.vehicle(vid).done}
            if result.done:
                break
        if record_steps is not None:
            record_steps.append({"seed": episode_seed, "steps": actions_log})
        for idx, value in totals.items():
            agent_returns.setdefault(idx, []).append(value)
        episode_rewards.append(float(np.mean(list(totals.values()))) if totals else 0.0)
        crashes += 1 if episode_had_crash(state) else 0
        successes += 1 if episode_success(state, env.road) else 0
        pets.extend(compute_pet(state.zone_events))
    return {
        "eval_reward": float(np.mean(episode_rewards)) if episode_rewards else 0.0,
        "collision_rate": crashes / n_episodes if n_episodes else 0.0,
        "success_rate": successes / n_episodes if n_episodes else 0.0,
        "avg_speed": float(np.mean(speeds)) if speeds else 0.0,
        "avg_pet": float(np.mean(pets)) if pets else None,
        "per_agent_reward": {
            idx: float(np.mean(vals)) for idx, vals in sorted(agent_returns.items())
        },
        "n_episodes": n_episodes,
    }


def train(
    cfg: TrainConfig,
    env_cfg: EnvConfig,
    teacher=None,
    out_dir: str | None = None,
    resume: bool = False,
) -> TrainResult:
    """Run the full two-phase procedure; see the module docstring.

    With ``out_dir`` set, a rolling checkpoint and the training curve are
    persisted at every evaluation point, and ``resume=True`` continues an
    interrupted run from the stored episode counter.  Resuming inside
    phase 1 restarts the demonstration buffer (it is not serialized).
    """
    if cfg.episodes_teaching > 0 and cfg.execute_teacher_actions and teacher is None:
        raise ValueError("teaching episodes requested but no teacher supplied")
    env = MergeEnv(env_cfg)
    obs_dim = env_cfg.obs_dim
    n_agents = DENSITY_RANGES[normalize_density(env_cfg.density)][1]
    joint_dim = n_agents * obs_dim if cfg.critic_input == "joint" else obs_dim

    streams = np.random.SeedSequence(cfg.seed).spawn(4)
    rng_init = np.random.default_rng(streams[0])
    rng_env = np.random.default_rng(streams[1])
    rng_policy = np.random.default_rng(streams[2])
    rng_replay = np.random.default_rng(streams[3])
    rng_teacher = np.random.default_rng(np.random.SeedSequence((cfg.seed, 555)))
    rng_holdout = (
        np.random.default_rng(np.random.SeedSequence((cfg.seed, 777)))
        if cfg.holdout_every > 0
        else None
    )

    agents = build_agents(n_agents, obs_dim, joint_dim, cfg, rng_init)
    buffers = [ExpertBuffer(cfg.buffer_capacity) for _ in range(n_agents)]
    shared_buffer = SharedBufferView(buffers)
    curve_rows: list[dict] = []
    start_episode = 0

    ckpt_path = os.path.join(out_dir, "checkpoint.json") if out_dir else None
    curve_path = os.path.join(out_dir, "curve.csv") if out_dir else None
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    if resume and ckpt_path and os.path.exists(ckpt_path):
        payload = load_checkpoint(ckpt_path)
        _restore_from_checkpoint(payload, agents, cfg)
        rng_env.bit_generator.state = payload["rng"]["env"]
        rng_policy.bit_generator.state = payload["rng"]["policy"]
        rng_replay.bit_generator.state = payload["rng"]["replay"]
        rng_teacher.bit_generator.state = payload["rng"]["teacher"]
        start_episode = payload["episode"]
        curve_rows = _load_curve_rows(curve_path, up_to=start_episode)

    schedule = AnnealSchedule(cfg.lambda0, cfg.episodes_teaching)
    anneal = schedule.value

    for episode in range(start_episode + 1, cfg.total_episodes + 1):
        teaching = episode <= cfg.episodes_teaching
        lam = anneal(episode - 1) if teaching else 0.0
        episode_seed = int(rng_env.integers(0, 2**63 - 1))
        data = _rollout(
            env,
            agents,
            cfg,
            episode_seed,
            teaching,
            teacher if teaching else None,
            rng_policy,
            rng_teacher,
            rng_holdout,
        )
        for idx in range(n_agents):
            transitions = data.transitions[idx]
            if teaching:
                for t in transitions:
                    buffers[idx].append(t)
            _update_agent(agents[idx], [t for t in transitions if not t.holdout], cfg, lam)
            if teaching:
                _replay_distill(agents[idx], shared_buffer, cfg, rng_replay)
        if (
            episode == cfg.episodes_teaching
            and cfg.consolidation_steps > 0
            and cfg.lambda0 != 0.0
        ):
            # settle the distilled policies on the full demonstration pool
            # before self-learning takes over
            for idx in range(n_agents):
                opt = RmsProp(lr=cfg.consolidation_lr, decay=cfg.rms_decay, eps=cfg.rms_eps)
                _replay_distill(
                    agents[idx], shared_buffer, cfg, rng_replay,
                    steps=cfg.consolidation_steps, opt=opt,
                )

        if cfg.eval_interval > 0 and (
            episode % cfg.eval_interval == 0 or episode == cfg.total_episodes
        ):
            metrics = evaluate_policies(
                env_cfg, agents, cfg.eval_episodes, seed=cfg.seed * 1000 + episode,
                critic_input=cfg.critic_input,
            )
            rows = _metric_rows(metrics, episode, n_agents, lam)
            curve_rows.extend(rows)
            if out_dir:
                _write_curve(curve_path, curve_rows)
                save_checkpoint(
                    ckpt_path,
                    agents,
                    episode,
                    cfg,
                    env_cfg,
                    rng_states={
                        "env": rng_env.bit_generator.state,
                        "policy": rng_policy.bit_generator.state,
                        "replay": rng_replay.bit_generator.state,
                        "teacher": rng_teacher.bit_generator.state,
                    },
                )

    if out_dir:
        save_checkpoint(
            ckpt_path,
            agents,
            cfg.total_episodes,
            cfg,
            env_cfg,
            rng_states={
                "env": rng_env.bit_generator.state,
                "policy": rng_policy.bit_generator.state,
                "replay": rng_replay.bit_generator.state,
                "teacher": rng_teacher.bit_generator.state,
            },
        )
        _write_curve(curve_path, curve_rows)
    return TrainResult(
        agents=agents,
        curve_rows=curve_rows,
        buffers=buffers,
        episodes_run=cfg.total_episodes,
        n_agents=n_agents,
        obs_dim=obs_dim,
        joint_dim=joint_dim,
        checkpoint_path=ckpt_path,
    )


def train_baseline(
    cfg: TrainConfig, env_cfg: EnvConfig, out_dir: str | None = None, resume: bool = False
) -> TrainResult:
    """Plain actor-critic trainer: the whole budget runs as self-learning."""
    plain = replace(
        cfg,
        episodes_teaching=0,
        episodes_self=cfg.total_episodes,
        lambda0=0.0,
        execute_teacher_actions=False,
    )
    return train(plain, env_cfg, teacher=None, out_dir=out_dir, resume=resume)


def _metric_rows(metrics: dict, episode: int, n_agents: int, lam: float) -> list[dict]:
    rows = []
    for idx in range(n_agents):
        reward = metrics["per_agent_reward"].get(idx)
        rows.append(
            {
                "episode": episode,
                "agent": str(idx),
                "eval_reward": reward,
                "collision_rate": metrics["collision_rate"],
                "avg_speed": metrics["avg_speed"],
                "avg_pet": metrics["avg_pet"],
                "lambda": lam,
            }
        )
    rows.append(
        {
            "episode": episode,
            "agent": "mean",
            "eval_reward": metrics["eval_reward"],
            "collision_rate": metrics["collision_rate"],
            "avg_speed": metrics["avg_speed"],
            "avg_pet": metrics["avg_pet"],
            "lambda": lam,
        }
    )
    return rows


def _write_curve(path: str, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CURVE_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row[k] is None else row[k]) for k in CURVE_COLUMNS})


def _load_curve_rows(path: str | None, up_to: int) -> list[dict]:
    if not path or not os.path.exists(path):
        return []
    rows = []
    with open(path, newline="") as fh:
        for record in csv.DictReader(fh):
            if int(record["episode"]) <= up_to:
                rows.append(
                    {
                        "episode": int(record["episode"]),
                        "agent": record["agent"],
                        "eval_reward": float(record["eval_reward"]) if record["eval_reward"] else None,
                        "collision_rate": float(record["collision_rate"]),
                        "avg_speed": float(record["avg_speed"]),
                        "avg_pet": float(record["avg_pet"]) if record["avg_pet"] else None,
                        "lambda": float(record["lambda"]),
                    }
                )
    return rows


def _params_to_lists(params: MlpParams) -> dict:
    return {
        "weights": [w.tolist() for w in params.weights],
        "biases": [b.tolist() for b in params.biases],
    }


def _params_from_lists(payload: dict) -> MlpParams:
    return MlpParams(
        weights=[np.array(w, dtype=float) for w in payload["weights"]],
        biases=[np.array(b, dtype=float) for b in payload["biases"]],
    )


def save_checkpoint(
    path: str,
    agents: list[AgentNets],
    episode: int,
    cfg: TrainConfig,
    env_cfg: EnvConfig,
    rng_states: dict | None = None,
) -> None:
    payload = {
        "format": CKPT_FORMAT,
        "episode": episode,
        "n_agents": len(agents),
        "obs_dim": agents[0].actor.sizes[0],
        "joint_dim": agents[0].critic.sizes[0],
        "hidden": list(cfg.hidden),
        "critic_input": cfg.critic_input,
        "scenario_id": env_cfg.scenario_id,
        "density": env_cfg.density,
        "agents": [
            {
                "actor": _params_to_lists(a.actor),
                "critic": _params_to_lists(a.critic),
                "actor_opt": a.actor_opt.state_dict(),
                "critic_opt": a.critic_opt.state_dict(),
                "replay_opt": a.replay_opt.state_dict(),
            }
            for a in agents
        ],
        "rng": rng_states or {},
    }
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def load_checkpoint(path: str) -> dict:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format") != CKPT_FORMAT:
        raise ValueError(f"unsupported checkpoint format: {payload.get('format')!r}")
    return payload


def _restore_from_checkpoint(payload: dict, agents: list[AgentNets], cfg: TrainConfig) -> None:
    if payload["n_agents"] != len(agents):
        raise ValueError("checkpoint agent count does not match configuration")
    for nets, stored in zip(agents, payload["agents"]):
        nets.actor = _params_from_lists(stored["actor"])
        nets.critic = _params_from_lists(stored["critic"])
        nets.actor_opt.load_state_dict(stored["actor_opt"])
        nets.critic_opt.load_state_dict(stored["critic_opt"])
        if "replay_opt" in stored:
            nets.replay_opt.load_state_dict(stored["replay_opt"])


def agents_from_checkpoint(payload: dict, cfg: TrainConfig | None = None) -> list[AgentNets]:
    cfg = cfg or TrainConfig()
    agents = []
    for stored in payload["agents"]:
        nets = AgentNets(
            actor=_params_from_lists(stored["actor"]),
            critic=_params_from_lists(stored["critic"]),
            actor_opt=RmsProp(lr=cfg.lr, decay=cfg.rms_decay, eps=cfg.rms_eps),
            critic_opt=RmsProp(lr=cfg.lr, decay=cfg.rms_decay, eps=cfg.rms_eps),
            replay_opt=RmsProp(lr=cfg.replay_lr, decay=cfg.rms_decay, eps=cfg.rms_eps),
        )
        nets.actor_opt.load_state_dict(stored["actor_opt"])
        nets.critic_opt.load_state_dict(stored["critic_opt"])
        if "replay_opt" in stored:
            nets.replay_opt.load_state_dict(stored["replay_opt"])
        agents.append(nets)
    return agents
