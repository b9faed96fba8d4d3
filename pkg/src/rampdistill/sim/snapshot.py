"""JSON scene snapshots for golden tests and teacher interop.

Schema (``scene-v1``)::

    {
      "format": "scene-v1",
      "scenario_id": 1,
      "time": 3.0,
      "vehicles": [{"id", "kind", "x", "y", "speed", "heading", "lane",
                    "target_speed", "target_lane", "length", "width",
                    "crashed", "exited", "offroad"}, ...],
      "collisions": [{"a", "b", "time"}, ...],
      "zone_events": [{"id", "enter", "exit"}, ...]   # exit null while open
    }

Floats round-trip exactly (json uses repr), so export/import is lossless.
"""
from __future__ import annotations

import json

from .env import Collision, EnvState, ZoneEvent
from .vehicles import VehicleState

FORMAT = "scene-v1"


def state_to_dict(state: EnvState, scenario_id: int) -> dict:
    return {
        "format": FORMAT,
        "scenario_id": scenario_id,
        "time": state.time,
        "vehicles": [
            {
                "id": v.vehicle_id,
                "kind": v.kind,
                "x": v.x,
                "y": v.y,
                "speed": v.speed,
                "heading": v.heading,
                "lane": v.lane,
                "target_speed": v.target_speed,
                "target_lane": v.target_lane,
                "length": v.length,
                "width": v.width,
                "crashed": v.crashed,
                "exited": v.exited,
                "offroad": v.offroad,
            }
            for v in state.vehicles
        ],
        "collisions": [{"a": c.a, "b": c.b, "time": c.time} for c in state.collisions],
        "zone_events": [
            {"id": z.vehicle_id, "enter": z.enter, "exit": z.exit} for z in state.zone_events
        ],
    }


def state_from_dict(payload: dict) -> tuple[EnvState, int]:
    if payload.get("format") != FORMAT:
        raise ValueError(f"unsupported snapshot format: {payload.get('format')!r}")
    vehicles = [
        VehicleState(
            vehicle_id=v["id"],
            kind=v["kind"],
            x=v["x"],
            y=v["y"],
            speed=v["speed"],
            heading=v["heading"],
            lane=v["lane"],
            target_speed=v["target_speed"],
            target_lane=v["target_lane"],
            length=v.get("length", 5.0),
            width=v.get("width", 2.0),
            crashed=v.get("crashed", False),
            exited=v.get("exited", False),
            offroad=v.get("offroad", False),
        )
        for v in payload["vehicles"]
    ]
    state = EnvState(
        time=payload["time"],
        vehicles=vehicles,
        collisions=[Collision(c["a"], c["b"], c["time"]) for c in payload.get("collisions", [])],
        zone_events=[
            ZoneEvent(z["id"], z["enter"], z["exit"]) for z in payload.get("zone_events", [])
        ],
    )
    return state, int(payload["scenario_id"])


def dump_scene(state: EnvState, scenario_id: int) -> str:
    return json.dumps(state_to_dict(state, scenario_id), sort_keys=True)


def load_scene(text: str) -> tuple[EnvState, int]:
    return state_from_dict(json.loads(text))


def save_scene(path: str, state: EnvState, scenario_id: int) -> None:
    with open(path, "w") as fh:
        fh.write(dump_scene(state, scenario_id))
        fh.write("\n")


def read_scene(path: str) -> tuple[EnvState, int]:
    with open(path) as fh:
        return load_scene(fh.read())
