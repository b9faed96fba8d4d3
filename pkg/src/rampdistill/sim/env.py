"""Deterministic ramp-merge environment.

One decision period applies a joint meta-action and integrates the
kinematics over ``substeps`` sub-steps.  CAVs follow a target-speed /
target-lane controller; HVs follow IDM longitudinally and MOBIL laterally.
All randomness lives in ``reset``; stepping is a pure function of state,
which is what lets the teacher re-use it for trajectory prediction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..actions import Action
from .config import DENSITY_RANGES, EnvConfig, RewardWeights, normalize_density
from .driver_models import LaneContext, idm_acceleration, mobil_decide
from .road import RAMP_ID, RoadNetwork, build_road
from .vehicles import (
    DEFAULT_LENGTH,
    KIND_CAV,
    KIND_HV,
    VehicleState,
    bumper_gap,
    rectangles_overlap,
)


class SpawnError(RuntimeError):
    """Raised when no spawn layout satisfies the spacing constraint."""


class ActionError(ValueError):
    """Raised when the joint action does not cover exactly the live CAVs."""


@dataclass(slots=True)
class Collision:
    a: str
    b: str
    time: float


@dataclass(slots=True)
class ZoneEvent:
    vehicle_id: str
    enter: float
    exit: float | None = None


@dataclass
class EnvState:
    """Mutable simulation state; ``clone`` is cheap and deep enough to fork."""

    time: float
    vehicles: list[VehicleState]
    collisions: list[Collision] = field(default_factory=list)
    zone_events: list[ZoneEvent] = field(default_factory=list)
    episode_done: bool = False

    def vehicle(self, vehicle_id: str) -> VehicleState:
        for v in self.vehicles:
            if v.vehicle_id == vehicle_id:
                return v
        raise KeyError(f"unknown vehicle: {vehicle_id}")

    def cavs(self) -> list[VehicleState]:
        return [v for v in self.vehicles if v.is_cav]

    def live_cavs(self) -> list[VehicleState]:
        return [v for v in self.vehicles if v.is_cav and not v.done]

    def done_flags(self) -> dict[str, bool]:
        return {v.vehicle_id: v.done for v in self.cavs()}

    def clone(self) -> "EnvState":
        return EnvState(
            time=self.time,
            vehicles=[v.clone() for v in self.vehicles],
            collisions=[Collision(c.a, c.b, c.time) for c in self.collisions],
            zone_events=[ZoneEvent(z.vehicle_id, z.enter, z.exit) for z in self.zone_events],
            episode_done=self.episode_done,
        )


@dataclass
class StepResult:
    state: EnvState
    observations: dict[str, np.ndarray]
    rewards: dict[str, float]
    done: bool
    info: dict


class MergeEnv:
    """Stateless-core environment; callers pass the EnvState explicitly."""

    def __init__(self, config: EnvConfig | None = None, road: RoadNetwork | None = None):
        self.config = config or EnvConfig()
        self.road = road or build_road(self.config.scenario_id)

    # ------------------------------------------------------------------ reset

    def reset(self, seed: int) -> tuple[EnvState, dict[str, np.ndarray]]:
        """Spawn a fresh episode; identical (config, seed) gives identical state."""
        rng = np.random.default_rng(seed)
        cfg = self.config
        lo, hi = DENSITY_RANGES[normalize_density(cfg.density)]
        n = int(rng.integers(lo, hi + 1))
        spawn_lanes = [l.lane_id for l in self.road.through_lanes] + [RAMP_ID]

        for _ in range(cfg.max_spawn_attempts):
            lanes = [spawn_lanes[int(rng.integers(0, len(spawn_lanes)))] for _ in range(n)]
            if cfg.ensure_ramp_vehicle and RAMP_ID not in lanes:
                lanes[int(rng.integers(0, n))] = RAMP_ID
            xs = []
            for lane_id in lanes:
                x_lo, x_hi = cfg.ramp_spawn_range if lane_id == RAMP_ID else cfg.main_spawn_range
                xs.append(float(rng.uniform(x_lo, x_hi)))
            if self._spacing_ok(lanes, xs, cfg.min_spacing):
                break
        else:
            raise SpawnError(
                f"no spawn with spacing >= {cfg.min_spacing} m found in "
                f"{cfg.max_spawn_attempts} attempts"
            )

        kinds = [KIND_CAV if rng.random() < cfg.cav_ratio else KIND_HV for _ in range(n)]
        if KIND_CAV not in kinds:
            kinds[int(rng.integers(0, n))] = KIND_CAV

        vehicles = []
        cav_idx = 0
        hv_idx = 0
        for kind, lane_id, x in zip(kinds, lanes, xs):
            v_lo, v_hi = cfg.ramp_speed_range if lane_id == RAMP_ID else cfg.main_speed_range
            speed = float(rng.uniform(v_lo, v_hi))
            if kind == KIND_CAV:
                vid = f"cav{cav_idx}"
                cav_idx += 1
            else:
                vid = f"hv{hv_idx}"
                hv_idx += 1
            vehicles.append(
                VehicleState(
                    vehicle_id=vid,
                    kind=kind,
                    x=x,
                    y=self.road.lane(lane_id).y,
                    speed=speed,
                    heading=0.0,
                    lane=lane_id,
                    target_speed=speed,
                    target_lane=lane_id,
                )
            )
        state = EnvState(time=0.0, vehicles=vehicles)
        self._update_zone_events(state)
        obs = {v.vehicle_id: self.observe(state, v.vehicle_id) for v in state.live_cavs()}
        return state, obs

    @staticmethod
    def _spacing_ok(lanes: list[str], xs: list[float], min_spacing: float) -> bool:
        per_lane: dict[str, list[float]] = {}
        for lane_id, x in zip(lanes, xs):
            per_lane.setdefault(lane_id, []).append(x)
        for values in per_lane.values():
            values.sort()
            for a, b in zip(values, values[1:]):
                if b - a < min_spacing:
                    return False
        return True

    # ------------------------------------------------------------------- step

    def step(self, state: EnvState, joint_action: dict[str, Action]) -> StepResult:
        """Advance one decision period; mutates ``state`` and returns outcomes."""
        live_before = {v.vehicle_id for v in state.live_cavs()}
        given = set(joint_action)
        if given != live_before:
            missing = sorted(live_before - given)
            extra = sorted(given - live_before)
            raise ActionError(f"joint action mismatch: missing={missing} unexpected={extra}")

        crashed_before = {v.vehicle_id for v in state.vehicles if v.crashed}
        self.advance(state, joint_action)
        newly_crashed = {
            v.vehicle_id for v in state.vehicles if v.crashed and v.vehicle_id not in crashed_before
        }

        rewards = {
            cav_id: self.reward(state, cav_id, crashed=cav_id in newly_crashed)
            for cav_id in sorted(live_before)
        }
        done = self._episode_done(state)
        if done and not state.episode_done:
            state.episode_done = True
            self._close_zone_events(state)
        observations = {
            cav_id: (
                self.observe(state, cav_id)
                if not state.vehicle(cav_id).done
                else np.zeros((self.config.n_obs, 6))
            )
            for cav_id in sorted(live_before)
        }
        info = {
            "new_collisions": [(c.a, c.b) for c in state.collisions if c.time > state.time - self.config.decision_period + 1e-9],
            "offroad": sorted(v.vehicle_id for v in state.vehicles if v.offroad),
            "exited": sorted(v.vehicle_id for v in state.vehicles if v.exited),
        }
        return StepResult(state, observations, rewards, done, info)

    def advance(self, state: EnvState, joint_action: dict[str, Action]) -> None:
        """Dynamics only: meta-actions, sub-step integration, collisions, events.

        Used directly by the teacher's trajectory predictor, so it must stay
        free of randomness and of observation/reward bookkeeping.
        """
        cfg = self.config
        road = self.road
        for cav_id, action in joint_action.items():
            v = state.vehicle(cav_id)
            if v.done:
                raise ActionError(f"action given for finished CAV {cav_id}")
            self._apply_meta_action(v, action)
        for v in state.vehicles:
            if v.kind == KIND_HV and not v.done:
                self._hv_lane_decision(state, v)

        for _ in range(cfg.substeps):
            moving = [v for v in state.vehicles if not v.done]
            accels = [self._acceleration(state, v) for v in moving]
            for v, accel in zip(moving, accels):
                self._integrate(v, accel)
            state.time = round(state.time + cfg.dt, 9)
            self._detect_collisions(state)
            self._update_zone_events(state)

    def _apply_meta_action(self, v: VehicleState, action: Action) -> None:
        cfg = self.config
        if action == Action.SPEED_UP:
            v.target_speed = min(v.target_speed + cfg.speed_step, cfg.v_max)
        elif action == Action.SLOW_DOWN:
            v.target_speed = max(v.target_speed - cfg.speed_step, 0.0)
        elif action == Action.CHANGE_LEFT:
            target = self.road.left_of(v.lane, v.x)
            if target is not None:
                v.target_lane = target
        elif action == Action.CHANGE_RIGHT:
            target = self.road.right_of(v.lane, v.x)
            if target is not None:
                v.target_lane = target
        # CRUISE keeps both targets

    def _hv_lane_decision(self, state: EnvState, v: VehicleState) -> None:
        road = self.road
        if abs(v.y - road.lane(v.target_lane).y) > 0.3:
            return  # mid lane change, let it settle first
        left_id, right_id = road.adjacent(v.lane, v.x)
        if not self.config.hv_lane_change_into_ramp and right_id == RAMP_ID:
            right_id = None
        current = self._lane_context(state, v, v.lane)
        left = self._lane_context(state, v, left_id) if left_id else None
        right = self._lane_context(state, v, right_id) if right_id else None
        choice = mobil_decide(v, current, left, right, self.config.mobil, self.config.idm)
        if choice == "left" and left_id:
            v.target_lane = left_id
        elif choice == "right" and right_id:
            v.target_lane = right_id

    def _lane_context(self, state: EnvState, ego: VehicleState, lane_id: str) -> LaneContext:
        leader = None
        follower = None
        for other in state.vehicles:
            if other is ego or not other.active or other.lane != lane_id:
                continue
            if other.x > ego.x:
                if leader is None or other.x < leader.x:
                    leader = other
            elif other.x < ego.x:
                if follower is None or other.x > follower.x:
                    follower = other
        wall = self._ramp_wall(lane_id, ego)
        if wall is not None and (leader is None or wall.x < leader.x):
            leader = wall
        return LaneContext(lane_id, leader, follower)

    def _ramp_wall(self, lane_id: str, ego: VehicleState) -> VehicleState | None:
        """Virtual stopped vehicle whose rear bumper sits at the ramp end."""
        if lane_id != RAMP_ID:
            return None
        end = self.road.ramp.x_end
        return VehicleState(
            vehicle_id="__ramp_end__",
            kind=KIND_HV,
            x=end + 0.5 * DEFAULT_LENGTH,
            y=self.road.ramp.y,
            speed=0.0,
            heading=0.0,
            lane=RAMP_ID,
            target_speed=0.0,
            target_lane=RAMP_ID,
        )

    def _acceleration(self, state: EnvState, v: VehicleState) -> float:
        cfg = self.config
        if v.is_cav:
            accel = cfg.speed_gain * (v.target_speed - v.speed)
            return max(-cfg.accel_limit, min(cfg.accel_limit, accel))
        ctx = self._lane_context(state, v, v.lane)
        return idm_acceleration(v, ctx.leader, cfg.idm)

    def _integrate(self, v: VehicleState, accel: float) -> None:
        cfg = self.config
        road = self.road
        dt = cfg.dt
        v.speed = max(0.0, min(cfg.v_max, v.speed + accel * dt))

        lateral_error = road.lane(v.target_lane).y - v.y
        vy_cmd = max(-cfg.lateral_speed_max, min(cfg.lateral_speed_max, cfg.lateral_gain * lateral_error))
        ratio = max(-0.9, min(0.9, vy_cmd / max(v.speed, 1.0)))
        heading_cmd = math.asin(ratio)
        v.heading += cfg.heading_gain * (heading_cmd - v.heading) * dt
        v.heading = max(-0.5, min(0.5, v.heading))

        v.x += v.speed * math.cos(v.heading) * dt
        v.y += v.speed * math.sin(v.heading) * dt

        right_edge = road.rightmost_through.y - 0.5 * road.rightmost_through.width
        if v.x > road.ramp.x_end and v.y < right_edge:
            v.offroad = True
            v.crashed = True
            return
        v.lane = road.lane_at(v.x, v.y)
        if v.lane != RAMP_ID and v.x > road.lane(v.lane).x_end:
            v.exited = True

    def _detect_collisions(self, state: EnvState) -> None:
        active = [v for v in state.vehicles if v.active]
        hit: set[str] = set()
        for i, a in enumerate(active):
            for b in active[i + 1 :]:
                if a.crashed and b.crashed:
                    continue
                if rectangles_overlap(a, b):
                    state.collisions.append(Collision(a.vehicle_id, b.vehicle_id, state.time))
                    hit.add(a.vehicle_id)
                    hit.add(b.vehicle_id)
        for v in state.vehicles:
            if v.vehicle_id in hit:
                v.crashed = True

    def _update_zone_events(self, state: EnvState) -> None:
        road = self.road
        open_events = {z.vehicle_id: z for z in state.zone_events if z.exit is None}
        for v in state.vehicles:
            inside = v.active and not v.crashed and road.in_conflict_zone(v.x, v.lane)
            event = open_events.get(v.vehicle_id)
            if inside and event is None:
                state.zone_events.append(ZoneEvent(v.vehicle_id, enter=state.time))
            elif not inside and event is not None:
                event.exit = state.time

    def _close_zone_events(self, state: EnvState) -> None:
        for z in state.zone_events:
            if z.exit is None:
                z.exit = state.time

    def _episode_done(self, state: EnvState) -> bool:
        if state.time >= self.config.time_limit - 1e-9:
            return True
        return all(v.done for v in state.cavs())

    # ---------------------------------------------------------------- rewards

    def reward(self, state: EnvState, cav_id: str, crashed: bool) -> float:
        total, _ = self.reward_components(state, cav_id, crashed)
        return total

    def reward_components(
        self, state: EnvState, cav_id: str, crashed: bool
    ) -> tuple[float, dict[str, float]]:
        """Weighted sum of collision, speed, headway and merging terms.

        r_c is -1 on a crash step; r_s is the speed fraction in [0, 1];
        r_h is ln(gap / (t_h * v)) clipped to [-1, 1] (0 with no leader);
        r_m is -x/L while on the ramp and 0 elsewhere.
        """
        cfg = self.config
        w = cfg.rewards
        v = state.vehicle(cav_id)

        r_c = -1.0 if crashed else 0.0
        r_s = max(0.0, min(1.0, v.speed / cfg.v_max))

        ctx = self._lane_context(state, v, v.lane)
        if ctx.leader is None or ctx.leader.vehicle_id == "__ramp_end__":
            r_h = 0.0
        else:
            gap = bumper_gap(v, ctx.leader)
            if gap <= 0.0:
                r_h = -1.0
            else:
                r_h = math.log(gap / (cfg.time_headway * max(v.speed, 0.1)))
                r_h = max(-1.0, min(1.0, r_h))

        if v.lane == RAMP_ID:
            L = self.road.merge_lane_length
            r_m = -max(0.0, min(1.0, v.x / L))
        else:
            r_m = 0.0

        total = w.collision * r_c + w.speed * r_s + w.headway * r_h + w.merging * r_m
        return total, {"collision": r_c, "speed": r_s, "headway": r_h, "merging": r_m}

    # ------------------------------------------------------------ observation

    def observe(self, state: EnvState, cav_id: str) -> np.ndarray:
        """N_obs x 6 feature matrix: ego row plus nearest neighbours, in [-1, 1].

        Row 0 holds the ego's absolute, range-normalized features; the
        remaining rows hold the nearest active vehicles ego-relative, zero
        padded when fewer neighbours exist.
        """
        ego = state.vehicle(cav_id)
        if ego.done:
            raise KeyError(f"observation requested for finished CAV {cav_id}")
        cfg = self.config
        x_ref = self.road.rightmost_through.x_end
        y_ref = 3.0 * self.road.rightmost_through.width
        v_ref = cfg.v_max

        mat = np.zeros((cfg.n_obs, 6))
        mat[0] = [
            ego.x / x_ref,
            ego.y / y_ref,
            ego.vx / v_ref,
            ego.vy / v_ref,
            math.cos(ego.heading),
            math.sin(ego.heading),
        ]
        others = [v for v in state.vehicles if v is not ego and v.active]
        others.sort(key=lambda v: (math.hypot(v.x - ego.x, v.y - ego.y), v.vehicle_id))
        for row, v in enumerate(others[: cfg.n_obs - 1], start=1):
            mat[row] = [
                (v.x - ego.x) / cfg.obs_range,
                (v.y - ego.y) / y_ref,
                (v.vx - ego.vx) / v_ref,
                (v.vy - ego.vy) / v_ref,
                math.cos(v.heading),
                math.sin(v.heading),
            ]
        return np.clip(mat, -1.0, 1.0)
