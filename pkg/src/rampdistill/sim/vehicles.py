"""Vehicle state and the oriented-rectangle collision test."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

KIND_CAV = "CAV"
KIND_HV = "HV"

DEFAULT_LENGTH = 5.0
DEFAULT_WIDTH = 2.0


@dataclass(slots=True)
class VehicleState:
    """Pose, velocity and control targets of one vehicle in road coordinates.

    Speed is the scalar velocity along the heading, so the speed bound is
    exact by construction; vx/vy are derived.
    """

    vehicle_id: str
    kind: str
    x: float
    y: float
    speed: float
    heading: float
    lane: str
    target_speed: float
    target_lane: str
    length: float = DEFAULT_LENGTH
    width: float = DEFAULT_WIDTH
    crashed: bool = False
    exited: bool = False
    offroad: bool = False

    @property
    def vx(self) -> float:
        return self.speed * math.cos(self.heading)

    @property
    def vy(self) -> float:
        return self.speed * math.sin(self.heading)

    @property
    def is_cav(self) -> bool:
        return self.kind == KIND_CAV

    @property
    def active(self) -> bool:
        """Physically present on the road (crashed wrecks count, exits do not)."""
        return not self.exited

    @property
    def done(self) -> bool:
        return self.crashed or self.exited

    def clone(self) -> "VehicleState":
        return replace(self)


def bumper_gap(follower: VehicleState, leader: VehicleState) -> float:
    """Bumper-to-bumper gap; negative means the rectangles overlap longitudinally."""
    return (leader.x - follower.x) - 0.5 * (leader.length + follower.length)


def rectangles_overlap(a: VehicleState, b: VehicleState) -> bool:
    """Separating-axis overlap test for two heading-oriented rectangles."""
    dx = b.x - a.x
    dy = b.y - a.y
    reach = 0.5 * (math.hypot(a.length, a.width) + math.hypot(b.length, b.width))
    if dx * dx + dy * dy > reach * reach:
        return False
    corners_a = _corners(a)
    corners_b = _corners(b)
    for rect in (a, b):
        cos_h = math.cos(rect.heading)
        sin_h = math.sin(rect.heading)
        for axis in ((cos_h, sin_h), (-sin_h, cos_h)):
            lo_a, hi_a = _project(corners_a, axis)
            lo_b, hi_b = _project(corners_b, axis)
            if hi_a < lo_b or hi_b < lo_a:
                return False
    return True


def _corners(v: VehicleState) -> list[tuple[float, float]]:
    cos_h = math.cos(v.heading)
    sin_h = math.sin(v.heading)
    hl = 0.5 * v.length
    hw = 0.5 * v.width
    return [
        (v.x + cos_h * sx * hl - sin_h * sy * hw, v.y + sin_h * sx * hl + cos_h * sy * hw)
        for sx, sy in ((1, 1), (1, -1), (-1, -1), (-1, 1))
    ]


def _project(corners: list[tuple[float, float]], axis: tuple[float, float]) -> tuple[float, float]:
    dots = [cx * axis[0] + cy * axis[1] for cx, cy in corners]
    return min(dots), max(dots)
