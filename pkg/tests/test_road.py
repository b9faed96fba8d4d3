import pytest

from rampdistill.sim import RAMP_ID, build_road


def test_scenario_1_has_one_through_lane():
    road = build_road(1)
    assert len(road.through_lanes) == 1


def test_scenario_2_has_two_through_lanes():
    road = build_road(2)
    assert len(road.through_lanes) == 2


def test_unknown_scenario_rejected():
    with pytest.raises(ValueError):
        build_road(3)


def test_default_geometry():
    road = build_road(1)
    assert road.merge_start == 220.0
    assert road.merge_end == 310.0
    assert road.merge_lane_length == 310.0
    assert road.rightmost_through.x_end == 500.0


def test_lane_ids_unique():
    road = build_road(2)
    ids = [l.lane_id for l in road.lanes()]
    assert len(ids) == len(set(ids))


def test_adjacency_respects_merge_window():
    road = build_road(2)
    # ramp -> main only inside the merge window
    assert road.left_of(RAMP_ID, 100.0) is None
    assert road.left_of(RAMP_ID, 250.0) == "main0"
    assert road.left_of(RAMP_ID, 311.0) is None
    # main0 right is the ramp inside the window, nothing outside
    assert road.right_of("main0", 250.0) == RAMP_ID
    assert road.right_of("main0", 100.0) is None
    # between through lanes
    assert road.left_of("main0", 50.0) == "main1"
    assert road.right_of("main1", 50.0) == "main0"
    assert road.left_of("main1", 50.0) is None


def test_lane_at_picks_nearest_containing_lane():
    road = build_road(1)
    assert road.lane_at(100.0, -4.0) == RAMP_ID
    assert road.lane_at(100.0, -1.0) == "main0"
    # past the ramp end only the through lane remains
    assert road.lane_at(320.0, -1.9) == "main0"


def test_conflict_zone_is_on_rightmost_through_lane():
    road = build_road(2)
    assert road.in_conflict_zone(250.0, "main0")
    assert not road.in_conflict_zone(250.0, "main1")
    assert not road.in_conflict_zone(250.0, RAMP_ID)
    assert not road.in_conflict_zone(100.0, "main0")
