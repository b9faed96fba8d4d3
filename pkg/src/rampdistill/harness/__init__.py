from .config import (
    ExperimentConfig,
    config_to_text,
    experiment_from_dict,
    load_experiment_config,
    parse_config_text,
)
from .report import (
    CURVE_LONG_COLUMNS,
    REPORT_COLUMNS,
    EvalReport,
    emit_report,
    parse_report_csv,
    render_curves_long_csv,
    render_report_csv,
    seed_mean,
)
from .run import (
    build_teacher,
    cross_validate,
    evaluate,
    run_training,
    train_config_for_seed,
    verify_episode_record,
)

__all__ = [
    "CURVE_LONG_COLUMNS",
    "EvalReport",
    "ExperimentConfig",
    "REPORT_COLUMNS",
    "build_teacher",
    "config_to_text",
    "cross_validate",
    "emit_report",
    "evaluate",
    "experiment_from_dict",
    "load_experiment_config",
    "parse_config_text",
    "parse_report_csv",
    "render_curves_long_csv",
    "render_report_csv",
    "run_training",
    "seed_mean",
    "train_config_for_seed",
    "verify_episode_record",
]
