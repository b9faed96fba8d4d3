"""Observation enhancement: semantic lane/vehicle relations and intentions.

The teacher turns a raw snapshot into a structured scene per CAV plus a
deterministic natural-language rendering that the LLM planner consumes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..actions import Action
from ..sim.config import EnvConfig
from ..sim.env import EnvState
from ..sim.road import RAMP_ID, RoadNetwork
from ..sim.vehicles import VehicleState
from .config import TeacherConfig


class LaneRelation(str, Enum):
    EGO = "ego"
    ADJACENT = "adjacent"
    CONFLICT = "conflict"


class VehicleRelation(str, Enum):
    FRONT = "front"
    REAR = "rear"
    SURROUNDING = "surrounding"
    CONFLICT = "conflict"


@dataclass(frozen=True)
class Intention:
    target_lane: str
    behavior: Action


@dataclass
class ScenarioDescription:
    """Structured scene for one CAV; ``text`` is a pure render of the rest."""

    cav_id: str
    lane_relations: dict[str, LaneRelation]
    vehicle_relations: dict[str, VehicleRelation]
    neighbor_states: dict[str, VehicleState]
    intentions: dict[str, Intention]
    text: str = ""


def infer_intention(
    vehicle: VehicleState,
    road: RoadNetwork,
    cfg: TeacherConfig | None = None,
    speed_gain: float = 1.0,
    accel_limit: float = 3.0,
) -> Intention:
    """Rule-based intention: merge urgency, then lateral motion, then speed trend.

    A ramp vehicle past half the merge lane intends to merge left; lateral
    velocity beyond the threshold signals the matching lane change; otherwise
    the speed-tracking acceleration sign decides, with a dead band around
    zero mapping to cruise.
    """
    cfg = cfg or TeacherConfig()
    if vehicle.lane == RAMP_ID and vehicle.x >= cfg.merge_intent_fraction * road.merge_lane_length:
        return Intention(road.rightmost_through.lane_id, Action.CHANGE_LEFT)
    vy = vehicle.vy
    if vy > cfg.lateral_speed_threshold:
        left = road.left_of(vehicle.lane, vehicle.x)
        return Intention(left or vehicle.lane, Action.CHANGE_LEFT)
    if vy < -cfg.lateral_speed_threshold:
        right = road.right_of(vehicle.lane, vehicle.x)
        return Intention(right or vehicle.lane, Action.CHANGE_RIGHT)
    accel = max(-accel_limit, min(accel_limit, speed_gain * (vehicle.target_speed - vehicle.speed)))
    if accel > cfg.accel_deadband:
        return Intention(vehicle.lane, Action.SPEED_UP)
    if accel < -cfg.accel_deadband:
        return Intention(vehicle.lane, Action.SLOW_DOWN)
    return Intention(vehicle.lane, Action.CRUISE)


def enhance_observation(
    state: EnvState,
    road: RoadNetwork,
    cav_id: str,
    cfg: TeacherConfig | None = None,
    env_cfg: EnvConfig | None = None,
) -> ScenarioDescription:
    """Classify lanes and vehicles around one CAV and infer everyone's intent."""
    cfg = cfg or TeacherConfig()
    env_cfg = env_cfg or EnvConfig()
    ego = state.vehicle(cav_id)
    if ego.done:
        raise KeyError(f"scene requested for finished CAV {cav_id}")

    lane_relations = _classify_lanes(road, ego)
    vehicle_relations: dict[str, VehicleRelation] = {}
    neighbor_states: dict[str, VehicleState] = {}
    front, rear = _front_and_rear(state, ego)
    for other in state.vehicles:
        if other is ego or not other.active:
            continue
        if other.vehicle_id == front:
            relation = VehicleRelation.FRONT
        elif other.vehicle_id == rear:
            relation = VehicleRelation.REAR
        elif _is_conflicting(road, ego, other):
            relation = VehicleRelation.CONFLICT
        else:
            relation = VehicleRelation.SURROUNDING
        vehicle_relations[other.vehicle_id] = relation
        neighbor_states[other.vehicle_id] = other.clone()

    intentions = {
        v.vehicle_id: infer_intention(v, road, cfg, env_cfg.speed_gain, env_cfg.accel_limit)
        for v in state.vehicles
        if v.is_cav and not v.done
    }
    desc = ScenarioDescription(
        cav_id=cav_id,
        lane_relations=lane_relations,
        vehicle_relations=vehicle_relations,
        neighbor_states=neighbor_states,
        intentions=intentions,
    )
    desc.text = render_scene_text(desc, state, road)
    return desc


def _classify_lanes(road: RoadNetwork, ego: VehicleState) -> dict[str, LaneRelation]:
    relations = {ego.lane: LaneRelation.EGO}
    if ego.lane == RAMP_ID:
        relations[road.rightmost_through.lane_id] = LaneRelation.CONFLICT
    elif ego.lane == road.rightmost_through.lane_id and ego.x <= road.merge_end:
        relations[RAMP_ID] = LaneRelation.CONFLICT
    for adj in road.adjacent(ego.lane, ego.x):
        if adj is not None and adj not in relations:
            relations[adj] = LaneRelation.ADJACENT
    return relations


def _front_and_rear(state: EnvState, ego: VehicleState) -> tuple[str | None, str | None]:
    front = None
    rear = None
    for other in state.vehicles:
        if other is ego or not other.active or other.lane != ego.lane:
            continue
        if other.x > ego.x and (front is None or other.x < state.vehicle(front).x):
            front = other.vehicle_id
        elif other.x < ego.x and (rear is None or other.x > state.vehicle(rear).x):
            rear = other.vehicle_id
    return front, rear


def _is_conflicting(road: RoadNetwork, ego: VehicleState, other: VehicleState) -> bool:
    """True when the two vehicles' paths cross in the merge zone ahead of both."""
    ramp_main = {RAMP_ID, road.rightmost_through.lane_id}
    if {ego.lane, other.lane} != ramp_main:
        return False
    return ego.x <= road.merge_end and other.x <= road.merge_end


def render_scene_text(desc: ScenarioDescription, state: EnvState, road: RoadNetwork) -> str:
    """Deterministic text rendering; re-rendering the same fields is idempotent."""
    ego = state.vehicle(desc.cav_id)
    lines = [
        f"Vehicle {desc.cav_id} drives on lane {ego.lane} at x={ego.x:.1f} m, "
        f"speed {ego.speed:.1f} m/s.",
        "Lanes: "
        + (
            ", ".join(
                f"{lane_id} ({rel.value})" for lane_id, rel in sorted(desc.lane_relations.items())
            )
            or "none"
        )
        + ".",
    ]
    if desc.vehicle_relations:
        for vid in sorted(desc.vehicle_relations):
            v = desc.neighbor_states[vid]
            rel = desc.vehicle_relations[vid]
            lines.append(
                f"- {vid} ({v.kind}, {rel.value}): lane {v.lane}, x={v.x:.1f} m, "
                f"speed {v.speed:.1f} m/s."
            )
    else:
        lines.append("- no other vehicles nearby.")
    for cav_id in sorted(desc.intentions):
        intent = desc.intentions[cav_id]
        lines.append(
            f"Intention of {cav_id}: {intent.behavior.token} toward lane {intent.target_lane}."
        )
    return "\n".join(lines)
