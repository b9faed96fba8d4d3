"""Episode-level safety and success metrics."""
from __future__ import annotations

from .env import EnvState, ZoneEvent
from .road import RoadNetwork


def compute_pet(zone_events: list[ZoneEvent]) -> list[float]:
    """Post-encroachment times between consecutive conflict-zone traversals.

    Traversals are ordered by entry time; each consecutive pair of distinct
    vehicles contributes entry(later) - exit(earlier).  Overlapping
    occupancy (a negative gap) is a collision situation, not a PET, and is
    excluded.  Requires a closed log: every event must carry an exit time.
    """
    closed = [z for z in zone_events if z.exit is not None]
    if len(closed) != len(zone_events):
        raise ValueError("zone event log still has open intervals")
    ordered = sorted(closed, key=lambda z: (z.enter, z.vehicle_id))
    pets = []
    for earlier, later in zip(ordered, ordered[1:]):
        if earlier.vehicle_id == later.vehicle_id:
            continue
        gap = later.enter - earlier.exit
        if gap >= 0.0:
            pets.append(gap)
    return pets


def episode_success(state: EnvState, road: RoadNetwork) -> bool:
    """Zero collisions and every CAV past the merge end before the time limit."""
    if state.collisions:
        return False
    if any(v.offroad for v in state.vehicles if v.is_cav):
        return False
    return all(v.x > road.merge_end for v in state.cavs())


def episode_had_crash(state: EnvState) -> bool:
    """True when any collision was logged or any CAV ran off the road."""
    return bool(state.collisions) or any(v.offroad for v in state.vehicles if v.is_cav)
