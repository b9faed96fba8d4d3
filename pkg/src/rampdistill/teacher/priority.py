"""Priority scores deciding which CAV the safety checker fixes first.

p = alpha_1 * p_merge + alpha_2 * p_end + alpha_3 * p_headway + noise,
with p_merge = 0.5 on the merge lane (0 otherwise), p_end = x / L on the
merge lane (0 otherwise) and p_headway = -ln(gap / (t_h * v)), so short
headways raise urgency.  The Gaussian noise term only breaks exact ties.
"""
from __future__ import annotations

import math

import numpy as np

from ..sim.env import EnvState
from ..sim.road import RAMP_ID, RoadNetwork
from ..sim.vehicles import bumper_gap
from .config import TeacherConfig


def priority_score(
    state: EnvState,
    road: RoadNetwork,
    cav_id: str,
    cfg: TeacherConfig | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Composite priority of one CAV; pass ``rng=None`` to disable the noise."""
    cfg = cfg or TeacherConfig()
    ego = state.vehicle(cav_id)

    p_merge = 0.5 if ego.lane == RAMP_ID else 0.0
    if ego.lane == RAMP_ID:
        p_end = max(0.0, min(1.0, ego.x / road.merge_lane_length))
    else:
        p_end = 0.0
    p_headway = _headway_score(state, road, cav_id, cfg)

    score = cfg.alpha_merge * p_merge + cfg.alpha_end * p_end + cfg.alpha_headway * p_headway
    if rng is not None and cfg.priority_noise_std > 0:
        score += float(rng.normal(0.0, cfg.priority_noise_std))
    return score


def _headway_score(state: EnvState, road: RoadNetwork, cav_id: str, cfg: TeacherConfig) -> float:
    ego = state.vehicle(cav_id)
    cap = cfg.headway_score_cap
    leader_gap = math.inf
    for other in state.vehicles:
        if other is ego or not other.active or other.lane != ego.lane:
            continue
        if other.x > ego.x:
            leader_gap = min(leader_gap, bumper_gap(ego, other))
    if ego.lane == RAMP_ID:
        wall_gap = (road.ramp.x_end - ego.x) - 0.5 * ego.length
        leader_gap = min(leader_gap, wall_gap)
    if leader_gap == math.inf:
        return -cap
    if leader_gap <= 0:
        return cap
    value = -math.log(leader_gap / (cfg.time_headway * max(ego.speed, 0.1)))
    return max(-cap, min(cap, value))


def build_priority_list(
    state: EnvState,
    road: RoadNetwork,
    cfg: TeacherConfig | None = None,
    rng: np.random.Generator | None = None,
) -> list[tuple[str, float]]:
    """Live CAVs ordered by descending priority; id order breaks exact ties.

    Noise draws happen in sorted-id order so the result is reproducible for
    a given generator state.
    """
    cfg = cfg or TeacherConfig()
    ids = sorted(v.vehicle_id for v in state.live_cavs())
    scored = [(cav_id, priority_score(state, road, cav_id, cfg, rng)) for cav_id in ids]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored
