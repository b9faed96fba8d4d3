"""Conflict detection via time-to-conflict-point differences.

A pair is in conflict when their paths share a point: either the merge
zone (ramp vehicle vs rightmost-through vehicle) or plain same-lane
following, where the conflict point is the leader's current position.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..sim.env import EnvState
from ..sim.road import RAMP_ID, RoadNetwork
from ..sim.vehicles import VehicleState
from .config import TeacherConfig

RISK_NONE = "none"
RISK_LOW = "low"
RISK_HIGH = "high"


@dataclass(frozen=True)
class ConflictEntry:
    vehicle_i: str
    vehicle_j: str
    conflict_x: float
    ttcp_i: float
    ttcp_j: float
    delta: float
    risk: str

    def involves(self, vehicle_id: str) -> bool:
        return vehicle_id in (self.vehicle_i, self.vehicle_j)


@dataclass(frozen=True)
class ConflictReport:
    entries: tuple[ConflictEntry, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def risk_for(self, vehicle_id: str) -> str:
        levels = {RISK_NONE: 0, RISK_LOW: 1, RISK_HIGH: 2}
        best = RISK_NONE
        for entry in self.entries:
            if entry.involves(vehicle_id) and levels[entry.risk] > levels[best]:
                best = entry.risk
        return best

    def high_risk_pairs(self) -> list[ConflictEntry]:
        return [e for e in self.entries if e.risk == RISK_HIGH]


def ttcp(distance: float, speed: float, speed_floor: float = 0.1) -> float:
    """Time to conflict point d / v with the speed floored away from zero."""
    if distance < 0:
        raise ValueError(f"negative distance to conflict point: {distance}")
    return distance / max(speed, speed_floor)


def delta_ttcp(
    state_i: VehicleState,
    state_j: VehicleState,
    conflict_x: float,
    speed_floor: float = 0.1,
) -> tuple[float, float, float]:
    """TTCP of both vehicles toward a shared conflict point and |difference|."""
    t_i = ttcp(conflict_x - state_i.x, state_i.speed, speed_floor)
    t_j = ttcp(conflict_x - state_j.x, state_j.speed, speed_floor)
    return t_i, t_j, abs(t_i - t_j)


def grade_risk(ttcp_i: float, ttcp_j: float, delta: float, cfg: TeacherConfig) -> str:
    if delta < cfg.risk_high_delta and max(ttcp_i, ttcp_j) < cfg.risk_ttcp_max:
        return RISK_HIGH
    if delta < cfg.risk_low_delta:
        return RISK_LOW
    return RISK_NONE


def conflict_check(
    state: EnvState, road: RoadNetwork, cfg: TeacherConfig | None = None
) -> ConflictReport:
    """All pairwise conflicts in the scene, graded by TTCP difference."""
    cfg = cfg or TeacherConfig()
    active = [v for v in state.vehicles if v.active and not v.crashed]
    entries: list[ConflictEntry] = []
    merge_x = 0.5 * (road.merge_start + road.merge_end)
    right_id = road.rightmost_through.lane_id
    for i, a in enumerate(active):
        for b in active[i + 1 :]:
            entry = None
            if {a.lane, b.lane} == {RAMP_ID, right_id}:
                if a.x <= merge_x and b.x <= merge_x:
                    t_a, t_b, delta = delta_ttcp(a, b, merge_x, cfg.ttcp_speed_floor)
                    entry = (merge_x, t_a, t_b, delta)
            elif a.lane == b.lane:
                follower, leader = (a, b) if a.x <= b.x else (b, a)
                t_f, t_l, delta = delta_ttcp(follower, leader, leader.x, cfg.ttcp_speed_floor)
                if (follower, leader) == (a, b):
                    entry = (leader.x, t_f, t_l, delta)
                else:
                    entry = (leader.x, t_l, t_f, delta)
            if entry is None:
                continue
            conflict_x, t_a, t_b, delta = entry
            entries.append(
                ConflictEntry(
                    vehicle_i=a.vehicle_id,
                    vehicle_j=b.vehicle_id,
                    conflict_x=conflict_x,
                    ttcp_i=t_a,
                    ttcp_j=t_b,
                    delta=delta,
                    risk=grade_risk(t_a, t_b, delta, cfg),
                )
            )
    return ConflictReport(tuple(entries))
