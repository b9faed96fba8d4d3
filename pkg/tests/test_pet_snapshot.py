import pytest

from rampdistill.actions import Action
from rampdistill.sim import (
    EnvConfig,
    EnvState,
    MergeEnv,
    VehicleState,
    ZoneEvent,
    compute_pet,
    dump_scene,
    load_scene,
)


class TestComputePet:
    def test_definition(self):
        events = [ZoneEvent("a", enter=8.0, exit=10.0), ZoneEvent("b", enter=12.5, exit=14.0)]
        assert compute_pet(events) == [2.5]

    def test_single_vehicle_gives_empty_list(self):
        assert compute_pet([ZoneEvent("a", enter=1.0, exit=2.0)]) == []

    def test_empty_log(self):
        assert compute_pet([]) == []

    def test_three_vehicles_two_pets(self):
        # enumerate-pairs oracle: consecutive-by-entry (a,b) and (b,c)
        events = [
            ZoneEvent("a", enter=1.0, exit=3.0),
            ZoneEvent("b", enter=4.0, exit=6.5),
            ZoneEvent("c", enter=9.0, exit=11.0),
        ]
        assert compute_pet(events) == [4.0 - 3.0, 9.0 - 6.5]

    def test_overlapping_occupancy_excluded(self):
        events = [
            ZoneEvent("a", enter=1.0, exit=5.0),
            ZoneEvent("b", enter=4.0, exit=6.0),  # entered while a still inside
        ]
        assert compute_pet(events) == []

    def test_open_log_rejected(self):
        with pytest.raises(ValueError):
            compute_pet([ZoneEvent("a", enter=1.0, exit=None)])


class TestSnapshot:
    def test_round_trip_is_exact(self):
        env = MergeEnv(EnvConfig(density="medium"))
        state, _ = env.reset(3)
        for _ in range(6):
            live = state.live_cavs()
            if not live:
                break
            result = env.step(state, {v.vehicle_id: Action.CRUISE for v in live})
            if result.done:
                break
        text = dump_scene(state, scenario_id=1)
        restored, scenario = load_scene(text)
        assert scenario == 1
        assert restored == state
        assert dump_scene(restored, 1) == text

    def test_format_guard(self):
        with pytest.raises(ValueError):
            load_scene('{"format": "bogus"}')
