"""Road geometry for the two straight-lane ramp-merge layouts.

All lanes are straight and parallel to the x axis.  The lateral axis is
oriented so that +y points to the driver's left: additional through lanes
sit at positive y, the acceleration ramp at negative y.  The ramp runs
from x = 0 to the acceleration-lane end; a lane change onto the rightmost
through lane is only possible inside the merge window.
"""
from __future__ import annotations

from dataclasses import dataclass

DEFAULT_MAIN_SPAN = 500.0
DEFAULT_MERGE_START = 220.0
DEFAULT_MERGE_END = 310.0
DEFAULT_LANE_WIDTH = 4.0

RAMP_ID = "ramp"


@dataclass(frozen=True)
class Lane:
    lane_id: str
    y: float
    width: float
    x_start: float
    x_end: float

    def contains_x(self, x: float) -> bool:
        return self.x_start <= x <= self.x_end


@dataclass(frozen=True)
class RoadNetwork:
    """Static description of one merge scenario.

    ``through_lanes`` is ordered right to left (ascending y).  The merge
    lane length ``L`` runs from the ramp origin to the acceleration-lane
    end, and the conflict zone is the interval [merge_start, merge_end]
    on the rightmost through lane.
    """

    scenario_id: int
    through_lanes: tuple[Lane, ...]
    ramp: Lane
    merge_start: float
    merge_end: float

    def __post_init__(self) -> None:
        if not self.merge_start < self.merge_end:
            raise ValueError("merge window must satisfy merge_start < merge_end")
        if self.merge_end > max(l.x_end for l in self.through_lanes):
            raise ValueError("merge window extends past the main road")
        if self.merge_lane_length <= 0:
            raise ValueError("merge lane length must be positive")
        ids = [l.lane_id for l in self.lanes()]
        if len(ids) != len(set(ids)):
            raise ValueError(f"duplicate lane ids: {ids}")
        if any(l.width <= 0 for l in self.lanes()):
            raise ValueError("lane widths must be positive")

    @property
    def merge_lane_length(self) -> float:
        """Total merge-lane length L (ramp origin to acceleration-lane end)."""
        return self.ramp.x_end - self.ramp.x_start

    @property
    def rightmost_through(self) -> Lane:
        return self.through_lanes[0]

    def lanes(self) -> tuple[Lane, ...]:
        return self.through_lanes + (self.ramp,)

    def lane(self, lane_id: str) -> Lane:
        for lane in self.lanes():
            if lane.lane_id == lane_id:
                return lane
        raise KeyError(f"unknown lane: {lane_id}")

    def in_merge_window(self, x: float) -> bool:
        return self.merge_start <= x <= self.merge_end

    def left_of(self, lane_id: str, x: float) -> str | None:
        """Id of the adjacent lane to the left at position x, if reachable."""
        if lane_id == self.ramp.lane_id:
            return self.rightmost_through.lane_id if self.in_merge_window(x) else None
        idx = self._through_index(lane_id)
        if idx + 1 < len(self.through_lanes):
            return self.through_lanes[idx + 1].lane_id
        return None

    def right_of(self, lane_id: str, x: float) -> str | None:
        """Id of the adjacent lane to the right at position x, if reachable."""
        if lane_id == self.ramp.lane_id:
            return None
        idx = self._through_index(lane_id)
        if idx > 0:
            return self.through_lanes[idx - 1].lane_id
        return self.ramp.lane_id if self.in_merge_window(x) else None

    def adjacent(self, lane_id: str, x: float) -> tuple[str | None, str | None]:
        return self.left_of(lane_id, x), self.right_of(lane_id, x)

    def lane_at(self, x: float, y: float) -> str:
        """Nearest lane (by centerline offset) whose span contains x."""
        candidates = [l for l in self.lanes() if l.contains_x(x)]
        if not candidates:
            candidates = list(self.through_lanes)
        best = min(candidates, key=lambda l: (abs(y - l.y), l.lane_id))
        return best.lane_id

    def in_conflict_zone(self, x: float, lane_id: str) -> bool:
        return lane_id == self.rightmost_through.lane_id and self.merge_start <= x <= self.merge_end

    def _through_index(self, lane_id: str) -> int:
        for i, lane in enumerate(self.through_lanes):
            if lane.lane_id == lane_id:
                return i
        raise KeyError(f"unknown through lane: {lane_id}")


def build_road(
    scenario_id: int,
    main_span: float = DEFAULT_MAIN_SPAN,
    merge_start: float = DEFAULT_MERGE_START,
    merge_end: float = DEFAULT_MERGE_END,
    lane_width: float = DEFAULT_LANE_WIDTH,
) -> RoadNetwork:
    """Build the fixed geometry for scenario 1 (one through lane) or 2 (two).

    The ramp is an acceleration lane ending at ``merge_end``; its total
    length from origin to end is the merge-lane length L.
    """
    if scenario_id not in (1, 2):
        raise ValueError(f"unknown scenario id: {scenario_id} (expected 1 or 2)")
    n_through = scenario_id
    through = tuple(
        Lane(f"main{i}", y=i * lane_width, width=lane_width, x_start=0.0, x_end=main_span)
        for i in range(n_through)
    )
    ramp = Lane(RAMP_ID, y=-lane_width, width=lane_width, x_start=0.0, x_end=merge_end)
    return RoadNetwork(
        scenario_id=scenario_id,
        through_lanes=through,
        ramp=ramp,
        merge_start=merge_start,
        merge_end=merge_end,
    )
