"""Expert decision pipeline: enhance, plan, safety-check.

The planner backend is pluggable.  The oracle backend is a deterministic
rule (follow inferred intentions, yield on high-risk conflicts) so that
training runs fully offline; an LLM-backed planner exposing the same
``plan`` callable drops in unchanged.  Planner failures fall back to the
oracle and flag the decision.
"""
from __future__ import annotations

import math

import numpy as np

from ..actions import LANE_CHANGE_ACTIONS, Action
from ..sim.config import EnvConfig
from ..sim.env import EnvState
from ..sim.road import RoadNetwork, build_road
from .config import TeacherConfig
from .conflict import ConflictReport, conflict_check
from .priority import build_priority_list
from .safety import TeacherDecision, available_actions, safety_check
from .scene import ScenarioDescription, enhance_observation

BACKEND_ORACLE = "oracle"
BACKEND_LLM = "llm"


def oracle_plan(
    descriptions: dict[str, ScenarioDescription],
    report: ConflictReport,
    priorities: list[tuple[str, float]],
    state: EnvState,
    road: RoadNetwork,
    env_cfg: EnvConfig | None = None,
    cfg: TeacherConfig | None = None,
) -> dict[str, Action]:
    """Deterministic stand-in planner.

    Lane-change intentions become lane-change actions when available.
    Keep-lane driving cruises, or speeds up when the lane ahead is wide
    open and no conflict is pending.  Speed *intentions* are deliberately
    not replayed as actions: they describe a target adjustment already in
    progress, and re-issuing the meta-action every second compounds it
    until the target pins at an extreme.  In a high-risk conflict the
    lower-priority CAV (or the CAV, against a human driver) yields by
    slowing down unless it is already crawling; further braking stays with
    the safety checker.
    """
    env_cfg = env_cfg or EnvConfig()
    cfg = cfg or TeacherConfig()
    rank = {cav_id: idx for idx, (cav_id, _) in enumerate(priorities)}
    plan: dict[str, Action] = {}
    for cav_id in sorted(descriptions):
        desc = descriptions[cav_id]
        intent = desc.intentions[cav_id]
        action = intent.behavior
        if action not in LANE_CHANGE_ACTIONS or action not in available_actions(
            state, road, cav_id
        ):
            action = (
                Action.SPEED_UP
                if _open_road_ahead(state, road, cav_id, env_cfg)
                else Action.CRUISE
            )
        plan[cav_id] = action
    for entry in report.high_risk_pairs():
        pair = [vid for vid in (entry.vehicle_i, entry.vehicle_j) if vid in plan]
        if len(pair) == 2:
            loser = max(pair, key=lambda vid: (rank.get(vid, len(rank)), vid))
        elif len(pair) == 1:
            # conflict against a human driver: the CAV yields
            loser = pair[0]
        else:
            continue
        t_loser = entry.ttcp_i if loser == entry.vehicle_i else entry.ttcp_j
        t_other = entry.ttcp_j if loser == entry.vehicle_i else entry.ttcp_i
        if t_loser > t_other + cfg.yield_settled_margin:
            continue  # order already established; approaching the point re-shrinks
            # the gap but braking further would only stall the merge
        if state.vehicle(loser).speed >= YIELD_SPEED_FLOOR:
            plan[loser] = Action.SLOW_DOWN
    return plan


# below this speed the yield rule stops commanding further braking; the
# safety checker still overrides when a collision is actually predicted
YIELD_SPEED_FLOOR = 6.0


def _open_road_ahead(state: EnvState, road: RoadNetwork, cav_id: str, env_cfg: EnvConfig) -> bool:
    """Wide-open lane beyond the merge zone.

    Speed recovery only happens once the CAV has cleared the merge area,
    where the rule reduces to own position, own speed and the in-lane gap:
    all directly observable, so the planner's choice stays predictable
    from the student's observation and cannot oscillate against the
    merge-conflict yield rule.
    """
    ego = state.vehicle(cav_id)
    if ego.x <= road.merge_end or ego.lane == road.ramp.lane_id:
        return False
    if ego.speed >= env_cfg.v_max - 2.0:
        return False
    clearance = 5.0 * env_cfg.time_headway * max(ego.speed, 5.0)
    gap = math.inf
    for other in state.vehicles:
        if other is ego or not other.active or other.lane != ego.lane:
            continue
        if other.x > ego.x:
            gap = min(gap, (other.x - ego.x) - 0.5 * (other.length + ego.length))
    return gap > clearance


def teacher_decide(
    state: EnvState,
    env_cfg: EnvConfig | None = None,
    road: RoadNetwork | None = None,
    cfg: TeacherConfig | None = None,
    backend: str = BACKEND_ORACLE,
    rng: np.random.Generator | int | None = None,
    llm_planner=None,
) -> TeacherDecision:
    """Full expert decision for every live CAV in the snapshot."""
    env_cfg = env_cfg or EnvConfig()
    road = road or build_road(env_cfg.scenario_id)
    cfg = cfg or TeacherConfig()
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    if backend not in (BACKEND_ORACLE, BACKEND_LLM):
        raise ValueError(f"unknown teacher backend: {backend!r}")
    live = sorted(v.vehicle_id for v in state.live_cavs())
    if not live:
        return TeacherDecision(actions={}, provenance={}, initial_plan={}, priorities=[])

    descriptions = {
        cav_id: enhance_observation(state, road, cav_id, cfg, env_cfg) for cav_id in live
    }
    report = conflict_check(state, road, cfg)
    priorities = build_priority_list(state, road, cfg, rng)

    fallback = False
    plan = None
    if backend == BACKEND_LLM:
        if llm_planner is None:
            raise ValueError("llm backend selected but no planner supplied")
        try:
            plan = llm_planner.plan(descriptions, report, live_ids=live)
        except Exception:
            fallback = True
    if plan is None:
        plan = oracle_plan(descriptions, report, priorities, state, road, env_cfg, cfg)

    decision = safety_check(env_cfg, road, state, plan, cfg, rng, priorities=priorities)
    decision.fallback = fallback
    return decision


class TeacherAgent:
    """Stateful convenience wrapper used by the training loop and the CLI."""

    def __init__(
        self,
        env_cfg: EnvConfig | None = None,
        road: RoadNetwork | None = None,
        cfg: TeacherConfig | None = None,
        backend: str = BACKEND_ORACLE,
        llm_planner=None,
        seed: int | None = None,
    ):
        self.env_cfg = env_cfg or EnvConfig()
        self.road = road or build_road(self.env_cfg.scenario_id)
        self.cfg = cfg or TeacherConfig()
        self.backend = backend
        self.llm_planner = llm_planner
        self.rng = np.random.default_rng(seed)

    def decide(self, state: EnvState, rng: np.random.Generator | None = None) -> TeacherDecision:
        return teacher_decide(
            state,
            env_cfg=self.env_cfg,
            road=self.road,
            cfg=self.cfg,
            backend=self.backend,
            rng=rng if rng is not None else self.rng,
            llm_planner=self.llm_planner,
        )
