from .config import DENSITY_RANGES, EnvConfig, RewardWeights, max_vehicles, normalize_density
from .driver_models import HARD_BRAKE, IdmParams, LaneContext, MobilParams, idm_acceleration, mobil_decide
from .env import ActionError, Collision, EnvState, MergeEnv, SpawnError, StepResult, ZoneEvent
from .metrics import compute_pet, episode_had_crash, episode_success
from .road import RAMP_ID, Lane, RoadNetwork, build_road
from .snapshot import dump_scene, load_scene, read_scene, save_scene, state_from_dict, state_to_dict
from .vehicles import KIND_CAV, KIND_HV, VehicleState, bumper_gap, rectangles_overlap

__all__ = [
    "ActionError",
    "Collision",
    "DENSITY_RANGES",
    "EnvConfig",
    "EnvState",
    "HARD_BRAKE",
    "IdmParams",
    "KIND_CAV",
    "KIND_HV",
    "Lane",
    "LaneContext",
    "MergeEnv",
    "MobilParams",
    "RAMP_ID",
    "RewardWeights",
    "RoadNetwork",
    "SpawnError",
    "StepResult",
    "VehicleState",
    "ZoneEvent",
    "build_road",
    "bumper_gap",
    "compute_pet",
    "dump_scene",
    "episode_had_crash",
    "episode_success",
    "idm_acceleration",
    "load_scene",
    "max_vehicles",
    "mobil_decide",
    "normalize_density",
    "read_scene",
    "rectangles_overlap",
    "save_scene",
    "state_from_dict",
    "state_to_dict",
]
