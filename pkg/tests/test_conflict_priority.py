import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rampdistill.sim import EnvState, VehicleState, build_road
from rampdistill.teacher import (
    RISK_HIGH,
    RISK_NONE,
    TeacherConfig,
    build_priority_list,
    conflict_check,
    delta_ttcp,
    grade_risk,
    priority_score,
)


def vehicle(vid, lane, x, speed, road, kind="CAV"):
    return VehicleState(
        vehicle_id=vid,
        kind=kind,
        x=x,
        y=road.lane(lane).y,
        speed=speed,
        heading=0.0,
        lane=lane,
        target_speed=speed,
        target_lane=lane,
    )


def ttcp_inputs(road, d_i, v_i, d_j, v_j, conflict_x=265.0):
    a = vehicle("a", "main0", conflict_x - d_i, v_i, road)
    b = vehicle("b", "ramp", conflict_x - d_j, v_j, road)
    return a, b


class TestDeltaTtcp:
    def setup_method(self):
        self.road = build_road(1)

    def test_direct_arithmetic(self):
        a, b = ttcp_inputs(self.road, 50.0, 10.0, 30.0, 10.0)
        t_a, t_b, delta = delta_ttcp(a, b, 265.0)
        assert (t_a, t_b, delta) == (5.0, 3.0, 2.0)

    def test_identical_inputs_give_zero(self):
        a, b = ttcp_inputs(self.road, 40.0, 8.0, 40.0, 8.0)
        _, _, delta = delta_ttcp(a, b, 265.0)
        assert delta == 0.0

    def test_symmetry_under_swap(self):
        a, b = ttcp_inputs(self.road, 50.0, 12.0, 30.0, 9.0)
        _, _, d1 = delta_ttcp(a, b, 265.0)
        _, _, d2 = delta_ttcp(b, a, 265.0)
        assert d1 == d2

    def test_negative_distance_rejected(self):
        a, b = ttcp_inputs(self.road, -1.0, 10.0, 30.0, 10.0)
        with pytest.raises(ValueError):
            delta_ttcp(a, b, 265.0)

    def test_speed_floor_prevents_division_blowup(self):
        a, b = ttcp_inputs(self.road, 50.0, 0.0, 30.0, 10.0)
        t_a, _, _ = delta_ttcp(a, b, 265.0)
        assert t_a == 50.0 / 0.1

    @given(
        d_i=st.floats(0.0, 200.0),
        d_j=st.floats(0.0, 200.0),
        v_i=st.floats(0.0, 32.0),
        v_j=st.floats(0.0, 32.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_properties(self, d_i, d_j, v_i, v_j):
        road = build_road(1)
        a, b = ttcp_inputs(road, d_i, v_i, d_j, v_j)
        t_a, t_b, delta = delta_ttcp(a, b, 265.0)
        _, _, delta_swapped = delta_ttcp(b, a, 265.0)
        assert delta >= 0.0
        assert delta == delta_swapped
        assert (delta == 0.0) == (t_a == t_b)


class TestConflictCheck:
    def setup_method(self):
        self.road = build_road(1)
        self.cfg = TeacherConfig()

    def test_lone_vehicle_gives_empty_report(self):
        state = EnvState(time=0.0, vehicles=[vehicle("cav0", "main0", 100.0, 25.0, self.road)])
        assert len(conflict_check(state, self.road, self.cfg)) == 0

    def test_merge_pair_graded_by_threshold_rule(self):
        # conflict point sits mid-zone at x = 265
        merge_x = 0.5 * (self.road.merge_start + self.road.merge_end)
        a = vehicle("cav0", "ramp", merge_x - 60.0, 10.0, self.road)     # ttcp 6.0
        b = vehicle("hv0", "main0", merge_x - 72.0, 10.0, self.road, kind="HV")  # ttcp 7.2
        state = EnvState(time=0.0, vehicles=[a, b])
        report = conflict_check(state, self.road, self.cfg)
        assert len(report) == 1
        entry = report.entries[0]
        assert entry.delta == pytest.approx(1.2)
        assert entry.risk == RISK_HIGH

    def test_large_delta_is_none_risk(self):
        merge_x = 265.0
        a = vehicle("cav0", "ramp", merge_x - 30.0, 10.0, self.road)     # ttcp 3
        b = vehicle("hv0", "main0", merge_x - 90.0, 10.0, self.road, kind="HV")  # ttcp 9
        state = EnvState(time=0.0, vehicles=[a, b])
        entry = conflict_check(state, self.road, self.cfg).entries[0]
        assert entry.delta == pytest.approx(6.0)
        assert entry.risk == RISK_NONE

    def test_risk_monotone_in_delta(self):
        cfg = self.cfg
        risks = [grade_risk(5.0, 5.0 + d, d, cfg) for d in (0.5, 3.0, 6.0)]
        order = {RISK_HIGH: 2, "low": 1, RISK_NONE: 0}
        assert [order[r] for r in risks] == sorted([order[r] for r in risks], reverse=True)

    def test_same_lane_following_detected(self):
        a = vehicle("cav0", "main0", 100.0, 25.0, self.road)
        b = vehicle("hv0", "main0", 130.0, 25.0, self.road, kind="HV")
        state = EnvState(time=0.0, vehicles=[a, b])
        report = conflict_check(state, self.road, self.cfg)
        assert len(report) == 1
        assert report.entries[0].conflict_x == 130.0


class TestPriority:
    def setup_method(self):
        self.road = build_road(1)
        self.cfg = TeacherConfig()

    def test_main_road_vehicle_has_zero_merge_terms(self):
        state = EnvState(time=0.0, vehicles=[vehicle("cav0", "main0", 100.0, 25.0, self.road)])
        # alone on a through lane: p_merge = p_end = 0 and headway term is floored
        score = priority_score(state, self.road, "cav0", self.cfg, rng=None)
        assert score == pytest.approx(-self.cfg.headway_score_cap)

    def test_merge_lane_base_score(self):
        # lone ramp vehicle far from the ramp end: p_merge = 0.5 contributes
        road = build_road(1)
        state = EnvState(time=0.0, vehicles=[vehicle("cav0", "ramp", 31.0, 20.0, road)])
        score = priority_score(state, road, "cav0", self.cfg, rng=None)
        p_end = 31.0 / road.merge_lane_length
        wall_gap = (road.ramp.x_end - 31.0) - 2.5
        p_h = -math.log(wall_gap / (1.2 * 20.0))
        assert score == pytest.approx(0.5 + p_end + p_h, abs=1e-9)

    def test_hand_computed_composite(self):
        # merge lane, x = 120, L = 150, leader gap 20 m, t_h = 1.2, v = 10:
        # 0.5 + 120/150 - ln(20 / 12) = 0.789174...
        road = build_road(1, merge_start=60.0, merge_end=150.0)
        assert road.merge_lane_length == 150.0
        ego = vehicle("cav0", "ramp", 120.0, 10.0, road)
        leader = vehicle("hv0", "ramp", 145.0, 10.0, road, kind="HV")
        state = EnvState(time=0.0, vehicles=[ego, leader])
        score = priority_score(state, road, "cav0", self.cfg, rng=None)
        expected = 0.5 + 120.0 / 150.0 - math.log(20.0 / (1.2 * 10.0))
        assert score == pytest.approx(expected, abs=1e-9)
        assert expected == pytest.approx(0.7891743762340093, abs=1e-12)

    def test_zero_headway_caps_score(self):
        road = build_road(1)
        ego = vehicle("cav0", "main0", 100.0, 25.0, road)
        leader = vehicle("hv0", "main0", 104.0, 25.0, road, kind="HV")  # overlapping gap
        state = EnvState(time=0.0, vehicles=[ego, leader])
        score = priority_score(state, road, "cav0", self.cfg, rng=None)
        assert score == pytest.approx(self.cfg.headway_score_cap)

    def test_ordering_invariant_to_common_shift(self):
        env_state = EnvState(
            time=0.0,
            vehicles=[
                vehicle("cav0", "ramp", 200.0, 18.0, self.road),
                vehicle("cav1", "main0", 150.0, 25.0, self.road),
                vehicle("cav2", "main0", 60.0, 25.0, self.road),
            ],
        )
        ranked = build_priority_list(env_state, self.road, self.cfg, rng=None)
        scores = dict(ranked)
        shifted = sorted(scores, key=lambda vid: (-(scores[vid] + 123.45), vid))
        assert [vid for vid, _ in ranked] == shifted

    def test_deterministic_without_noise_and_seeded_with(self):
        state = EnvState(
            time=0.0,
            vehicles=[
                vehicle("cav0", "ramp", 200.0, 18.0, self.road),
                vehicle("cav1", "main0", 150.0, 25.0, self.road),
            ],
        )
        a = build_priority_list(state, self.road, self.cfg, rng=None)
        b = build_priority_list(state, self.road, self.cfg, rng=None)
        assert a == b
        c = build_priority_list(state, self.road, self.cfg, rng=np.random.default_rng(0))
        d = build_priority_list(state, self.road, self.cfg, rng=np.random.default_rng(0))
        assert c == d

    def test_merge_lane_near_end_outranks_main_with_equal_headway(self):
        # both CAVs have the same leader gap; the ramp CAV near the lane end
        # must rank first
        road = build_road(1)
        ramp_cav = vehicle("cav0", "ramp", 280.0, 20.0, road)
        main_cav = vehicle("cav1", "main0", 100.0, 20.0, road)
        main_lead = vehicle("hv1", "main0", 132.5, 20.0, road, kind="HV")
        state = EnvState(time=0.0, vehicles=[ramp_cav, main_cav, main_lead])
        ramp_wall_gap = (road.ramp.x_end - 280.0) - 2.5  # 27.5 m, same as hv1 gap
        assert ramp_wall_gap == pytest.approx((132.5 - 100.0) - 5.0)
        ranked = build_priority_list(state, road, self.cfg, rng=None)
        assert ranked[0][0] == "cav0"
