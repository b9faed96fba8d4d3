"""Car-following (IDM) and lane-change (MOBIL) models for human-driven vehicles.

Both models are pure functions of the local scene, so the teacher's
trajectory predictor and the simulator share them verbatim.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .vehicles import VehicleState, bumper_gap

HARD_BRAKE = 5.0  # m/s^2, emergency deceleration floor

STAY = "stay"
LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class IdmParams:
    """Intelligent Driver Model parameters.

    v0: desired speed (m/s); T: desired time headway (s); s0: jam gap (m);
    a_max: maximum acceleration (m/s^2); b: comfortable braking (m/s^2);
    delta: acceleration exponent.
    """

    v0: float = 30.0
    T: float = 1.5
    s0: float = 2.0
    a_max: float = 3.0
    b: float = 2.0
    delta: float = 4.0

    def __post_init__(self) -> None:
        if min(self.v0, self.T, self.s0, self.a_max, self.b, self.delta) <= 0:
            raise ValueError("IDM parameters must be positive")


@dataclass(frozen=True)
class MobilParams:
    politeness: float = 0.1
    b_safe: float = 2.0
    a_th: float = 0.1

    def __post_init__(self) -> None:
        if self.b_safe <= 0 or self.b_safe > HARD_BRAKE:
            raise ValueError("b_safe must be in (0, hard-brake capability]")


def idm_acceleration(ego: VehicleState, leader: VehicleState | None, p: IdmParams) -> float:
    """IDM longitudinal acceleration, clamped to [-hard brake, a_max].

    A non-positive bumper gap returns the emergency-brake floor instead of
    dividing by zero.
    """
    v = max(ego.speed, 0.0)
    free = 1.0 - (v / p.v0) ** p.delta
    if leader is None:
        return _clamp(p.a_max * free, -HARD_BRAKE, p.a_max)
    gap = bumper_gap(ego, leader)
    if gap <= 0.0:
        return -HARD_BRAKE
    dv = v - leader.speed
    # dynamic part clamped at zero, else a fast leader shrinks s* below the
    # jam gap and the squared ratio grows again
    s_star = p.s0 + max(0.0, v * p.T + v * dv / (2.0 * math.sqrt(p.a_max * p.b)))
    accel = p.a_max * (free - (s_star / gap) ** 2)
    return _clamp(accel, -HARD_BRAKE, p.a_max)


@dataclass(frozen=True)
class LaneContext:
    """Immediate leader/follower pair seen on one lane."""

    lane_id: str
    leader: VehicleState | None = None
    follower: VehicleState | None = None


def mobil_decide(
    ego: VehicleState,
    current: LaneContext,
    left: LaneContext | None,
    right: LaneContext | None,
    mp: MobilParams,
    ip: IdmParams,
) -> str:
    """MOBIL lane-change decision: 'stay', 'left' or 'right'.

    A change requires the new follower to keep its deceleration above
    -b_safe and the politeness-weighted acceleration gain to exceed a_th.
    Equal gains prefer stay over left over right.
    """
    a_ego_old = idm_acceleration(ego, current.leader, ip)
    best_side = STAY
    best_gain = -math.inf
    for side, ctx in ((LEFT, left), (RIGHT, right)):
        if ctx is None:
            continue
        gain = _change_gain(ego, current, ctx, a_ego_old, mp, ip)
        if gain is None or gain <= mp.a_th:
            continue
        if gain > best_gain:
            best_side = side
            best_gain = gain
    return best_side


def _change_gain(
    ego: VehicleState,
    current: LaneContext,
    target: LaneContext,
    a_ego_old: float,
    mp: MobilParams,
    ip: IdmParams,
) -> float | None:
    """Politeness-weighted gain of moving ego into ``target``; None if unsafe."""
    a_ego_new = idm_acceleration(ego, target.leader, ip)
    a_new_follower_after = 0.0
    a_new_follower_before = 0.0
    if target.follower is not None:
        a_new_follower_after = idm_acceleration(target.follower, ego, ip)
        if a_new_follower_after < -mp.b_safe:
            return None
        a_new_follower_before = idm_acceleration(target.follower, target.leader, ip)
    a_old_follower_before = 0.0
    a_old_follower_after = 0.0
    if current.follower is not None:
        a_old_follower_before = idm_acceleration(current.follower, ego, ip)
        a_old_follower_after = idm_acceleration(current.follower, current.leader, ip)
    others_gain = (a_new_follower_after - a_new_follower_before) + (
        a_old_follower_after - a_old_follower_before
    )
    return (a_ego_new - a_ego_old) + mp.politeness * others_gain


def _clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x
