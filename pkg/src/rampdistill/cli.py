"""Command-line entry points: train, evaluate, cross-validate, teach, replay."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .harness.config import ExperimentConfig, experiment_from_dict, load_experiment_config
from .harness.report import emit_report
from .harness.run import (
    build_teacher,
    cross_validate,
    evaluate,
    run_training,
    verify_episode_record,
)
from .sim.config import EnvConfig, normalize_density
from .sim.road import build_road
from .sim.snapshot import read_scene
from .teacher.agent import teacher_decide
from .teacher.config import TeacherConfig


def _add_llm_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--llm-endpoint", default="", help="chat-completions endpoint URL")
    parser.add_argument("--llm-model", default="gpt-4o", help="model id sent to the endpoint")
    parser.add_argument(
        "--llm-mode",
        choices=["live", "record", "replay"],
        default="live",
        help="network mode for planner sessions",
    )
    parser.add_argument("--session-store", default="", help="JSONL session store path")


def _collect_overrides(args: argparse.Namespace) -> dict:
    mapping = {
        "scenario": "scenario_id",
        "density": "density",
        "seeds": "seeds",
        "episodes_teaching": "episodes_teaching",
        "episodes_self": "episodes_self",
        "backend": "teacher_backend",
        "llm_endpoint": "llm_endpoint",
        "llm_model": "llm_model",
        "llm_mode": "llm_mode",
        "session_store": "session_store",
    }
    overrides = {}
    for attr, key in mapping.items():
        value = getattr(args, attr, None)
        if value not in (None, ""):
            overrides[key] = value
    if "seeds" in overrides:
        overrides["seeds"] = tuple(int(s) for s in str(overrides["seeds"]).split(",") if s.strip())
    if "density" in overrides:
        overrides["density"] = normalize_density(overrides["density"])
    return overrides


def cmd_train(args: argparse.Namespace) -> int:
    overrides = _collect_overrides(args)
    if args.config:
        cfg = load_experiment_config(args.config, overrides)
    else:
        cfg = experiment_from_dict(overrides)
    summary = run_training(cfg, args.out, resume=not args.fresh)
    print(f"trained seeds {list(cfg.seeds)} -> {args.out}")
    for seed, path in summary["checkpoints"].items():
        print(f"  seed {seed}: {path}")
    print(f"  seed-mean curve: {summary['curve_mean_path']}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    report = evaluate(
        args.checkpoint,
        scenario_id=args.scenario,
        density=args.density,
        n_episodes=args.episodes,
        seed=args.seed,
        record_path=args.record or None,
    )
    if args.out:
        paths = emit_report([report], args.out)
        print(f"wrote {paths['csv']} and {paths['json']}")
    print(json.dumps(report.row(), indent=2, sort_keys=True))
    return 0


def cmd_cross_validate(args: argparse.Namespace) -> int:
    report = cross_validate(
        args.checkpoint,
        applied_density=args.applied_density,
        scenario_id=args.scenario,
        n_episodes=args.episodes,
        seed=args.seed,
    )
    if args.out:
        paths = emit_report([report], args.out)
        print(f"wrote {paths['csv']} and {paths['json']}")
    print(json.dumps(report.row(), indent=2, sort_keys=True))
    return 0


def cmd_teach(args: argparse.Namespace) -> int:
    state, scenario_id = read_scene(args.snapshot)
    env_cfg = EnvConfig(scenario_id=scenario_id)
    road = build_road(scenario_id)
    teacher_cfg = TeacherConfig(horizon=args.horizon)
    llm_planner = None
    if args.backend == "llm":
        cfg = experiment_from_dict(
            {
                "teacher_backend": "llm",
                "llm_endpoint": args.llm_endpoint,
                "llm_model": args.llm_model,
                "llm_mode": args.llm_mode,
                "session_store": args.session_store,
            }
        )
        llm_planner = build_teacher(cfg, env_cfg).llm_planner
    decision = teacher_decide(
        state,
        env_cfg,
        road,
        cfg=teacher_cfg,
        backend=args.backend,
        rng=np.random.default_rng(args.seed),
        llm_planner=llm_planner,
    )
    print(
        json.dumps(
            {
                "actions": {vid: a.token for vid, a in sorted(decision.actions.items())},
                "provenance": dict(sorted(decision.provenance.items())),
                "initial_plan": {
                    vid: a.token for vid, a in sorted(decision.initial_plan.items())
                },
                "priorities": [[vid, score] for vid, score in decision.priorities],
                "fallback": decision.fallback,
            },
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    outcome = verify_episode_record(args.episode)
    status = "ok" if outcome["mismatches"] == 0 else "MISMATCH"
    print(
        f"replay {status}: {outcome['episodes']} episodes, {outcome['steps']} steps, "
        f"{outcome['mismatches']} digest mismatches"
    )
    return 0 if outcome["mismatches"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rampdistill",
        description="Ramp-merge simulator, expert teacher, and distillation trainer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="run seeded training per the experiment config")
    p_train.add_argument("--config", help="key = value experiment config file")
    p_train.add_argument("--out", required=True, help="output directory")
    p_train.add_argument("--scenario", type=int, choices=[1, 2])
    p_train.add_argument("--density", choices=["easy", "simple", "medium", "hard"])
    p_train.add_argument("--seeds", help="comma-separated seed list")
    p_train.add_argument("--episodes-teaching", dest="episodes_teaching", type=int)
    p_train.add_argument("--episodes-self", dest="episodes_self", type=int)
    p_train.add_argument("--backend", choices=["oracle", "llm"])
    p_train.add_argument("--fresh", action="store_true", help="ignore existing checkpoints")
    _add_llm_flags(p_train)
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("evaluate", help="evaluate a checkpoint with greedy policies")
    p_eval.add_argument("--checkpoint", required=True)
    p_eval.add_argument("--scenario", type=int, choices=[1, 2])
    p_eval.add_argument("--density", choices=["easy", "simple", "medium", "hard"])
    p_eval.add_argument("--episodes", type=int, default=20)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--out", help="report path prefix (.csv/.json appended)")
    p_eval.add_argument("--record", help="write a replayable episode record here")
    p_eval.set_defaults(func=cmd_evaluate)

    p_cross = sub.add_parser("cross-validate", help="evaluate under an off-training density")
    p_cross.add_argument("--checkpoint", required=True)
    p_cross.add_argument(
        "--applied-density", required=True, choices=["easy", "simple", "medium", "hard"]
    )
    p_cross.add_argument("--scenario", type=int, choices=[1, 2])
    p_cross.add_argument("--episodes", type=int, default=20)
    p_cross.add_argument("--seed", type=int, default=0)
    p_cross.add_argument("--out", help="report path prefix")
    p_cross.set_defaults(func=cmd_cross_validate)

    p_teach = sub.add_parser("teach", help="adjudicate one scene snapshot")
    p_teach.add_argument("--snapshot", required=True, help="scene JSON from the simulator")
    p_teach.add_argument("--backend", choices=["oracle", "llm"], default="oracle")
    p_teach.add_argument("--horizon", type=int, default=3)
    p_teach.add_argument("--seed", type=int, default=0)
    _add_llm_flags(p_teach)
    p_teach.set_defaults(func=cmd_teach)

    p_replay = sub.add_parser("replay", help="verify a recorded run reproduces bit-identically")
    p_replay.add_argument("--episode", required=True, help="episode-v1 JSONL record")
    p_replay.set_defaults(func=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
