"""Trajectory prediction, safety margins, and priority-ordered action correction.

The predictor forks the simulator state and steps it with the exact same
dynamics the environment uses, so predicted human behaviour matches what
will actually happen.  The safety checker walks CAVs in priority order and
replaces any action whose rollout yields a collision with the available
action maximizing the worst-case margin over the horizon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..actions import LANE_CHANGE_ACTIONS, Action
from ..sim.config import EnvConfig
from ..sim.env import EnvState, MergeEnv
from ..sim.road import RAMP_ID, RoadNetwork
from ..sim.vehicles import DEFAULT_LENGTH
from .config import TeacherConfig
from .priority import build_priority_list

WALL_ID = "__ramp_end__"


@dataclass(frozen=True)
class PredictedStep:
    x: float
    y: float
    lane: str
    crashed: bool


@dataclass(frozen=True)
class TrajectoryPrediction:
    """Per-vehicle positions over the horizon plus predicted failures."""

    horizon: int
    tracks: dict[str, tuple[PredictedStep, ...]]
    collisions: tuple[tuple[str, str, int], ...]  # (id, id, step k)
    offroad: tuple[tuple[str, int], ...]

    def involves_failure(self, vehicle_id: str) -> bool:
        return any(vehicle_id in pair[:2] for pair in self.collisions) or any(
            vid == vehicle_id for vid, _ in self.offroad
        )

    def crash_step(self, vehicle_id: str) -> int | None:
        """First prediction step at which this vehicle crashes or runs off."""
        steps = [k for a, b, k in self.collisions if vehicle_id in (a, b)]
        steps += [k for vid, k in self.offroad if vid == vehicle_id]
        return min(steps) if steps else None


def available_actions(state: EnvState, road: RoadNetwork, cav_id: str) -> list[Action]:
    """Env-legal actions in fixed index order; slow down is always available."""
    ego = state.vehicle(cav_id)
    actions = [Action.SLOW_DOWN, Action.CRUISE, Action.SPEED_UP]
    if road.left_of(ego.lane, ego.x) is not None:
        actions.append(Action.CHANGE_LEFT)
    if road.right_of(ego.lane, ego.x) is not None:
        actions.append(Action.CHANGE_RIGHT)
    return actions


def predict_trajectories(
    env_cfg: EnvConfig,
    road: RoadNetwork,
    state: EnvState,
    actions: dict[str, Action],
    horizon: int,
) -> TrajectoryPrediction:
    """Roll the scene forward ``horizon`` decision steps on a forked state.

    CAVs apply their candidate action on the first step and hold their
    targets afterwards; HVs follow IDM/MOBIL.  Pure function of the inputs.
    """
    if horizon < 1:
        raise ValueError("prediction horizon must be >= 1")
    env = MergeEnv(env_cfg, road)
    sim = state.clone()
    sim_ids = [v.vehicle_id for v in sim.vehicles]
    tracks: dict[str, list[PredictedStep]] = {vid: [] for vid in sim_ids}
    collisions: list[tuple[str, str, int]] = []
    offroad: list[tuple[str, int]] = []
    crashed_before = {v.vehicle_id for v in sim.vehicles if v.crashed}
    offroad_before = {v.vehicle_id for v in sim.vehicles if v.offroad}

    for k in range(1, horizon + 1):
        joint = {
            v.vehicle_id: (actions.get(v.vehicle_id, Action.CRUISE) if k == 1 else Action.CRUISE)
            for v in sim.live_cavs()
        }
        n_collisions = len(sim.collisions)
        env.advance(sim, joint)
        for c in sim.collisions[n_collisions:]:
            collisions.append((c.a, c.b, k))
        for v in sim.vehicles:
            if v.offroad and v.vehicle_id not in offroad_before:
                offroad.append((v.vehicle_id, k))
                offroad_before.add(v.vehicle_id)
            tracks[v.vehicle_id].append(
                PredictedStep(v.x, v.y, v.lane, v.crashed and v.vehicle_id not in crashed_before)
            )
    return TrajectoryPrediction(
        horizon=horizon,
        tracks={vid: tuple(steps) for vid, steps in tracks.items()},
        collisions=tuple(collisions),
        offroad=tuple(offroad),
    )


def safety_margin(
    prediction: TrajectoryPrediction,
    state: EnvState,
    road: RoadNetwork,
    cav_id: str,
    action: Action,
    k: int,
) -> float:
    """Safety margin of one CAV at prediction step k (1-based).

    Keep-lane actions measure the longitudinal distance to the predicted
    preceding vehicle; lane changes take the minimum absolute offset over
    vehicles on the involved lanes, dropping the origin lane once the ego
    has crossed into the target lane.  Missing neighbours contribute +inf;
    the ramp end acts as a stopped leader, and a step at or after a
    predicted ego crash has no margin left at all.
    """
    if not 1 <= k <= prediction.horizon:
        raise ValueError(f"step {k} outside horizon 1..{prediction.horizon}")
    crash = prediction.crash_step(cav_id)
    if crash is not None and crash <= k:
        return 0.0
    ego_now = state.vehicle(cav_id)
    ego = prediction.tracks[cav_id][k - 1]

    if action in LANE_CHANGE_ACTIONS:
        if action == Action.CHANGE_LEFT:
            target = road.left_of(ego_now.lane, ego_now.x)
        else:
            target = road.right_of(ego_now.lane, ego_now.x)
        lanes = {ego.lane}
        settled = target is not None and ego.lane == target
        if not settled:
            lanes.add(ego_now.lane)
            if target is not None:
                lanes.add(target)
        margin = math.inf
        for vid, track in prediction.tracks.items():
            if vid == cav_id:
                continue
            step = track[k - 1]
            if step.lane in lanes:
                margin = min(margin, abs(step.x - ego.x))
        for lane_id in lanes:
            wall = _wall_margin(road, lane_id, ego.x)
            margin = min(margin, wall)
        return margin

    margin = math.inf
    for vid, track in prediction.tracks.items():
        if vid == cav_id:
            continue
        step = track[k - 1]
        if step.lane == ego.lane and step.x > ego.x:
            margin = min(margin, step.x - ego.x)
    margin = min(margin, _wall_margin(road, ego.lane, ego.x))
    return margin


def _wall_margin(road: RoadNetwork, lane_id: str, ego_x: float) -> float:
    if lane_id != RAMP_ID:
        return math.inf
    return (road.ramp.x_end + 0.5 * DEFAULT_LENGTH) - ego_x


def min_margin_over_horizon(
    prediction: TrajectoryPrediction,
    state: EnvState,
    road: RoadNetwork,
    cav_id: str,
    action: Action,
) -> float:
    return min(
        safety_margin(prediction, state, road, cav_id, action, k)
        for k in range(1, prediction.horizon + 1)
    )


def correct_action(
    env_cfg: EnvConfig,
    road: RoadNetwork,
    state: EnvState,
    cav_id: str,
    horizon: int,
    others: dict[str, Action] | None = None,
) -> Action:
    """Available action maximizing the worst-case margin over the horizon.

    Other CAVs hold the actions in ``others`` (cruise when absent).  Ties
    resolve to the lowest action index, so slow down wins an all-equal race.
    """
    others = dict(others or {})
    others.pop(cav_id, None)
    live = {v.vehicle_id for v in state.live_cavs()}
    others = {vid: act for vid, act in others.items() if vid in live}
    best_action = None
    best_margin = -math.inf
    for action in available_actions(state, road, cav_id):
        candidate = dict(others)
        candidate[cav_id] = action
        prediction = predict_trajectories(env_cfg, road, state, candidate, horizon)
        margin = min_margin_over_horizon(prediction, state, road, cav_id, action)
        if margin > best_margin:
            best_margin = margin
            best_action = action
    assert best_action is not None
    return best_action


@dataclass
class TeacherDecision:
    """Joint expert action set with provenance for every CAV."""

    actions: dict[str, Action]
    provenance: dict[str, str]  # "planner" | "safety"
    initial_plan: dict[str, Action]
    priorities: list[tuple[str, float]]
    fallback: bool = False

    def corrected_ids(self) -> list[str]:
        return sorted(vid for vid, src in self.provenance.items() if src == "safety")


def _conflicts_with_fixed_traffic(
    prediction: TrajectoryPrediction, cav_id: str, pending_lower: set[str]
) -> bool:
    """Predicted failure that this CAV itself must resolve.

    Collisions with lower-priority CAVs still awaiting their own turn are
    deferred: the lower-priority side yields.  Everything else (HVs,
    wrecks, already-fixed CAVs, running off the ramp end) is on this CAV.
    """
    for a, b, _k in prediction.collisions:
        if cav_id not in (a, b):
            continue
        other = b if a == cav_id else a
        if other not in pending_lower:
            return True
    return any(vid == cav_id for vid, _ in prediction.offroad)


def safety_check(
    env_cfg: EnvConfig,
    road: RoadNetwork,
    state: EnvState,
    plan: dict[str, Action],
    cfg: TeacherConfig | None = None,
    rng: np.random.Generator | None = None,
    priorities: list[tuple[str, float]] | None = None,
) -> TeacherDecision:
    """Verify a joint plan in priority order, correcting unsafe actions.

    Higher-priority CAVs' already-fixed actions stay constant while each
    lower one is examined; a predicted collision (or an unavailable planner
    action) triggers replacement via ``correct_action``.  Conflicts whose
    other party is a lower-priority CAV still awaiting its turn are
    deferred to that CAV; a second sweep then corrects anything the
    deferrals failed to resolve (a yielding CAV cannot always absorb a
    higher-priority mistake).
    """
    cfg = cfg or TeacherConfig()
    live = sorted(v.vehicle_id for v in state.live_cavs())
    missing = [vid for vid in live if vid not in plan]
    if missing:
        raise ValueError(f"plan does not cover live CAVs: {missing}")
    if priorities is None:
        priorities = build_priority_list(state, road, cfg, rng)

    working = {vid: plan[vid] for vid in live}
    provenance = {vid: "planner" for vid in live}
    pending = {vid for vid, _ in priorities}
    for cav_id, _score in priorities:
        pending.discard(cav_id)
        legal = available_actions(state, road, cav_id)
        needs_fix = working[cav_id] not in legal
        if not needs_fix:
            prediction = predict_trajectories(env_cfg, road, state, working, cfg.horizon)
            needs_fix = _conflicts_with_fixed_traffic(prediction, cav_id, pending)
        if needs_fix:
            working[cav_id] = correct_action(
                env_cfg, road, state, cav_id, cfg.horizon, others=working
            )
            provenance[cav_id] = "safety"
    for cav_id, _score in priorities:
        prediction = predict_trajectories(env_cfg, road, state, working, cfg.horizon)
        if prediction.involves_failure(cav_id):
            replacement = correct_action(
                env_cfg, road, state, cav_id, cfg.horizon, others=working
            )
            if replacement != working[cav_id]:
                working[cav_id] = replacement
                provenance[cav_id] = "safety"
    return TeacherDecision(
        actions=working,
        provenance=provenance,
        initial_plan=dict(plan),
        priorities=list(priorities),
    )
