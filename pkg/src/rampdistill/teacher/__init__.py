from .agent import BACKEND_LLM, BACKEND_ORACLE, TeacherAgent, oracle_plan, teacher_decide
from .config import TeacherConfig
from .conflict import (
    RISK_HIGH,
    RISK_LOW,
    RISK_NONE,
    ConflictEntry,
    ConflictReport,
    conflict_check,
    delta_ttcp,
    grade_risk,
    ttcp,
)
from .priority import build_priority_list, priority_score
from .safety import (
    TeacherDecision,
    TrajectoryPrediction,
    available_actions,
    correct_action,
    min_margin_over_horizon,
    predict_trajectories,
    safety_check,
    safety_margin,
)
from .scene import (
    Intention,
    LaneRelation,
    ScenarioDescription,
    VehicleRelation,
    enhance_observation,
    infer_intention,
    render_scene_text,
)

__all__ = [
    "BACKEND_LLM",
    "BACKEND_ORACLE",
    "ConflictEntry",
    "ConflictReport",
    "Intention",
    "LaneRelation",
    "RISK_HIGH",
    "RISK_LOW",
    "RISK_NONE",
    "ScenarioDescription",
    "TeacherAgent",
    "TeacherConfig",
    "TeacherDecision",
    "TrajectoryPrediction",
    "VehicleRelation",
    "available_actions",
    "build_priority_list",
    "conflict_check",
    "correct_action",
    "delta_ttcp",
    "enhance_observation",
    "grade_risk",
    "infer_intention",
    "min_margin_over_horizon",
    "oracle_plan",
    "predict_trajectories",
    "priority_score",
    "render_scene_text",
    "safety_check",
    "safety_margin",
    "teacher_decide",
    "ttcp",
]
