import math

import numpy as np
import pytest

from rampdistill.actions import Action
from rampdistill.sim import (
    ActionError,
    EnvConfig,
    EnvState,
    MergeEnv,
    SpawnError,
    VehicleState,
    build_road,
)


def make_env(**overrides) -> MergeEnv:
    return MergeEnv(EnvConfig(**overrides))


def put_vehicle(env, vid, lane, x, speed, kind="CAV", **kw) -> VehicleState:
    return VehicleState(
        vehicle_id=vid,
        kind=kind,
        x=x,
        y=env.road.lane(lane).y,
        speed=speed,
        heading=0.0,
        lane=lane,
        target_speed=kw.pop("target_speed", speed),
        target_lane=kw.pop("target_lane", lane),
        **kw,
    )


class TestReset:
    @pytest.mark.parametrize(
        "density,lo,hi", [("easy", 2, 4), ("medium", 4, 6), ("hard", 6, 8)]
    )
    def test_vehicle_counts_by_density(self, density, lo, hi):
        env = make_env(density=density)
        for seed in range(20):
            state, _ = env.reset(seed)
            assert lo <= len(state.vehicles) <= hi

    def test_reset_is_deterministic(self):
        env = make_env()
        s1, o1 = env.reset(42)
        s2, o2 = env.reset(42)
        assert s1 == s2
        assert sorted(o1) == sorted(o2)
        for key in o1:
            np.testing.assert_array_equal(o1[key], o2[key])

    def test_at_least_one_cav(self):
        env = make_env()
        for seed in range(30):
            state, _ = env.reset(seed)
            assert any(v.is_cav for v in state.vehicles)

    def test_spawn_spacing_and_speed_ranges(self):
        env = make_env(density="hard")
        for seed in range(20):
            state, _ = env.reset(seed)
            by_lane = {}
            for v in state.vehicles:
                by_lane.setdefault(v.lane, []).append(v.x)
                if v.lane == "ramp":
                    assert 15.0 <= v.speed <= 22.0
                else:
                    assert 22.0 <= v.speed <= 28.0
            for xs in by_lane.values():
                xs.sort()
                assert all(b - a >= 15.0 for a, b in zip(xs, xs[1:]))

    def test_infeasible_spawn_raises(self):
        env = make_env(density="hard", min_spacing=400.0, max_spawn_attempts=5)
        with pytest.raises(SpawnError):
            env.reset(0)


class TestStep:
    def test_cruise_on_empty_road_keeps_speed(self):
        env = make_env()
        cav = put_vehicle(env, "cav0", "main0", 50.0, 25.0)
        state = EnvState(time=0.0, vehicles=[cav])
        env.step(state, {"cav0": Action.CRUISE})
        assert state.vehicle("cav0").speed == pytest.approx(25.0, abs=1e-9)

    def test_speed_up_bumps_target_with_clamp(self):
        env = make_env()
        cav = put_vehicle(env, "cav0", "main0", 50.0, 25.0)
        state = EnvState(time=0.0, vehicles=[cav])
        env.step(state, {"cav0": Action.SPEED_UP})
        assert state.vehicle("cav0").target_speed == 30.0
        env.step(state, {"cav0": Action.SPEED_UP})
        assert state.vehicle("cav0").target_speed == 32.0  # clamped at v_max

    def test_overlap_is_logged_frozen_and_done(self):
        env = make_env()
        a = put_vehicle(env, "cav0", "main0", 50.0, 30.0)
        b = put_vehicle(env, "hv0", "main0", 58.0, 0.0, kind="HV")
        state = EnvState(time=0.0, vehicles=[a, b])
        result = env.step(state, {"cav0": Action.CRUISE})
        assert state.collisions, "expected a logged collision"
        crashed = state.vehicle("cav0")
        assert crashed.crashed
        assert result.done  # the only CAV is done
        frozen = (crashed.x, crashed.y, crashed.speed, crashed.heading)
        # further steps never touch the wreck
        env.advance(state, {})
        after = state.vehicle("cav0")
        assert (after.x, after.y, after.speed, after.heading) == frozen

    def test_action_for_crashed_cav_rejected(self):
        env = make_env()
        cav = put_vehicle(env, "cav0", "main0", 50.0, 25.0, crashed=True)
        state = EnvState(time=0.0, vehicles=[cav])
        with pytest.raises(ActionError):
            env.step(state, {"cav0": Action.CRUISE})

    def test_missing_action_rejected(self):
        env = make_env()
        cav = put_vehicle(env, "cav0", "main0", 50.0, 25.0)
        state = EnvState(time=0.0, vehicles=[cav])
        with pytest.raises(ActionError):
            env.step(state, {})

    def test_trajectory_determinism(self):
        env = make_env(density="medium")
        rng = np.random.default_rng(7)
        actions = [int(rng.integers(0, 5)) for _ in range(200)]

        def run():
            state, _ = env.reset(99)
            stream = iter(actions)
            while True:
                live = state.live_cavs()
                if not live:
                    break
                joint = {v.vehicle_id: Action(next(iter([next(stream)]))) for v in live}
                result = env.step(state, joint)
                if result.done:
                    break
            return state

        assert run() == run()

    def test_lane_change_reaches_target_centerline(self):
        env = make_env(scenario_id=2)
        cav = put_vehicle(env, "cav0", "main0", 50.0, 25.0)
        state = EnvState(time=0.0, vehicles=[cav])
        env.step(state, {"cav0": Action.CHANGE_LEFT})
        assert state.vehicle("cav0").target_lane == "main1"
        for _ in range(5):
            env.step(state, {"cav0": Action.CRUISE})
        v = state.vehicle("cav0")
        assert v.lane == "main1"
        assert abs(v.y - env.road.lane("main1").y) < 0.3

    def test_unreachable_lane_change_is_noop(self):
        env = make_env(scenario_id=1)
        cav = put_vehicle(env, "cav0", "main0", 50.0, 25.0)
        state = EnvState(time=0.0, vehicles=[cav])
        env.step(state, {"cav0": Action.CHANGE_LEFT})
        assert state.vehicle("cav0").target_lane == "main0"

    def test_ramp_overrun_is_terminal(self):
        env = make_env()
        cav = put_vehicle(env, "cav0", "ramp", 300.0, 22.0)
        state = EnvState(time=0.0, vehicles=[cav])
        result = env.step(state, {"cav0": Action.CRUISE})
        v = state.vehicle("cav0")
        assert v.offroad and v.crashed
        assert result.done
        assert result.rewards["cav0"] <= -env.config.rewards.collision + env.config.rewards.total


class TestObserve:
    def test_alone_pads_with_zeros(self):
        env = make_env()
        cav = put_vehicle(env, "cav0", "main0", 50.0, 25.0)
        state = EnvState(time=0.0, vehicles=[cav])
        obs = env.observe(state, "cav0")
        assert obs.shape == (6, 6)
        np.testing.assert_array_equal(obs[1:], np.zeros((5, 6)))

    def test_zero_heading_trig_features(self):
        env = make_env()
        cav = put_vehicle(env, "cav0", "main0", 50.0, 25.0)
        state = EnvState(time=0.0, vehicles=[cav])
        obs = env.observe(state, "cav0")
        assert obs[0, 4] == 1.0
        assert obs[0, 5] == 0.0

    def test_only_nearest_neighbours_kept(self):
        env = make_env()
        ego = put_vehicle(env, "cav0", "main0", 100.0, 25.0)
        others = [
            put_vehicle(env, f"hv{i}", "main0", 100.0 + 6.0 * (i + 1), 20.0, kind="HV")
            for i in range(7)
        ]
        state = EnvState(time=0.0, vehicles=[ego] + others)
        obs = env.observe(state, "cav0")
        # sort-by-distance oracle: the 5 nearest are hv0..hv4
        expected_dx = [6.0 * (i + 1) / env.config.obs_range for i in range(5)]
        np.testing.assert_allclose(obs[1:, 0], expected_dx, atol=1e-12)

    def test_entries_bounded_for_random_reachable_states(self):
        env = make_env(density="hard")
        for seed in range(10):
            state, obs = env.reset(seed)
            for _ in range(10):
                live = state.live_cavs()
                if not live:
                    break
                joint = {v.vehicle_id: Action.SPEED_UP for v in live}
                result = env.step(state, joint)
                for mat in result.observations.values():
                    assert mat.shape == (6, 6)
                    assert np.all(mat <= 1.0) and np.all(mat >= -1.0)
                if result.done:
                    break


class TestReward:
    def test_collision_term_dominates(self):
        env = make_env()
        cav = put_vehicle(env, "cav0", "main0", 50.0, 25.0)
        state = EnvState(time=0.0, vehicles=[cav])
        total, parts = env.reward_components(state, "cav0", crashed=True)
        assert parts["collision"] == -1.0
        # the weighted collision term contributes exactly -200
        assert total - (
            env.config.rewards.speed * parts["speed"]
            + env.config.rewards.headway * parts["headway"]
            + env.config.rewards.merging * parts["merging"]
        ) == pytest.approx(-200.0)

    def test_top_speed_no_leader_off_ramp(self):
        env = make_env()
        cav = put_vehicle(env, "cav0", "main0", 50.0, 32.0)
        state = EnvState(time=0.0, vehicles=[cav])
        _, parts = env.reward_components(state, "cav0", crashed=False)
        assert parts["speed"] == 1.0
        assert parts["merging"] == 0.0

    def test_headway_log_zero_at_design_gap(self):
        env = make_env()
        v = 20.0
        gap = env.config.time_headway * v
        ego = put_vehicle(env, "cav0", "main0", 100.0, v)
        leader = put_vehicle(env, "hv0", "main0", 100.0 + gap + 5.0, v, kind="HV")
        state = EnvState(time=0.0, vehicles=[ego, leader])
        _, parts = env.reward_components(state, "cav0", crashed=False)
        assert parts["headway"] == pytest.approx(0.0, abs=1e-12)

    def test_reward_bounded_by_weight_sum(self):
        env = make_env(density="hard")
        bound = env.config.rewards.total
        for seed in range(5):
            state, _ = env.reset(seed)
            for _ in range(15):
                live = state.live_cavs()
                if not live:
                    break
                joint = {v.vehicle_id: Action.SLOW_DOWN for v in live}
                result = env.step(state, joint)
                for r in result.rewards.values():
                    assert abs(r) <= bound + 1e-9
                if result.done:
                    break

    def test_ramp_lingering_penalty(self):
        env = make_env()
        cav = put_vehicle(env, "cav0", "ramp", 155.0, 18.0)
        state = EnvState(time=0.0, vehicles=[cav])
        _, parts = env.reward_components(state, "cav0", crashed=False)
        assert parts["merging"] == pytest.approx(-155.0 / 310.0)
        assert parts["merging"] <= 0.0
