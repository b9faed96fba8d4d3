"""Evaluation reports: CSV/JSON emission matching the benchmark metric set."""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import asdict, dataclass

REPORT_COLUMNS = [
    "scenario",
    "original_density",
    "applied_density",
    "seed",
    "eval_reward",
    "collision_rate",
    "avg_speed",
    "avg_pet",
    "success_rate",
]

CURVE_LONG_COLUMNS = ["episode", "seed", "metric", "value"]


@dataclass(frozen=True)
class EvalReport:
    scenario: int
    original_density: str
    applied_density: str
    seed: int | str
    eval_reward: float
    collision_rate: float
    avg_speed: float
    avg_pet: float | None
    success_rate: float
    n_episodes: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.collision_rate <= 1.0:
            raise ValueError("collision rate must lie in [0, 1]")
        if not 0.0 <= self.success_rate <= 1.0:
            raise ValueError("success rate must lie in [0, 1]")

    def row(self) -> dict:
        return {
            "scenario": self.scenario,
            "original_density": self.original_density,
            "applied_density": self.applied_density,
            "seed": self.seed,
            "eval_reward": self.eval_reward,
            "collision_rate": self.collision_rate,
            "avg_speed": self.avg_speed,
            "avg_pet": self.avg_pet,
            "success_rate": self.success_rate,
        }


def seed_mean(reports: list[EvalReport]) -> EvalReport:
    """Arithmetic mean across per-seed reports of one (scenario, density) cell."""
    if not reports:
        raise ValueError("cannot average an empty report list")
    scenarios = {r.scenario for r in reports}
    cells = {(r.original_density, r.applied_density) for r in reports}
    if len(scenarios) != 1 or len(cells) != 1:
        raise ValueError("seed mean needs reports from a single experiment cell")
    pets = [r.avg_pet for r in reports if r.avg_pet is not None]
    return EvalReport(
        scenario=reports[0].scenario,
        original_density=reports[0].original_density,
        applied_density=reports[0].applied_density,
        seed="mean",
        eval_reward=sum(r.eval_reward for r in reports) / len(reports),
        collision_rate=sum(r.collision_rate for r in reports) / len(reports),
        avg_speed=sum(r.avg_speed for r in reports) / len(reports),
        avg_pet=sum(pets) / len(pets) if pets else None,
        success_rate=sum(r.success_rate for r in reports) / len(reports),
        n_episodes=sum(r.n_episodes for r in reports),
    )


def render_report_csv(reports: list[EvalReport], include_mean: bool = True) -> str:
    if not reports:
        raise ValueError("no reports to emit")
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=REPORT_COLUMNS)
    writer.writeheader()
    rows = list(reports)
    if include_mean and len(reports) > 1:
        rows.append(seed_mean(reports))
    for report in rows:
        row = report.row()
        writer.writerow({k: ("" if row[k] is None else row[k]) for k in REPORT_COLUMNS})
    return out.getvalue()


def parse_report_csv(text: str) -> list[EvalReport]:
    reports = []
    for record in csv.DictReader(io.StringIO(text)):
        if record["seed"] == "mean":
            continue
        reports.append(
            EvalReport(
                scenario=int(record["scenario"]),
                original_density=record["original_density"],
                applied_density=record["applied_density"],
                seed=int(record["seed"]),
                eval_reward=float(record["eval_reward"]),
                collision_rate=float(record["collision_rate"]),
                avg_speed=float(record["avg_speed"]),
                avg_pet=float(record["avg_pet"]) if record["avg_pet"] else None,
                success_rate=float(record["success_rate"]),
            )
        )
    return reports


def render_curves_long_csv(curve_rows_by_seed: dict[int, list[dict]]) -> str:
    """Plot-ready long format: one (episode, seed, metric, value) row each."""
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=CURVE_LONG_COLUMNS)
    writer.writeheader()
    for seed in sorted(curve_rows_by_seed):
        for row in curve_rows_by_seed[seed]:
            if row["agent"] != "mean":
                continue
            for metric in ("eval_reward", "collision_rate", "avg_speed", "avg_pet", "lambda"):
                value = row[metric]
                if value is None:
                    continue
                writer.writerow(
                    {"episode": row["episode"], "seed": seed, "metric": metric, "value": value}
                )
    return out.getvalue()


def emit_report(
    reports: list[EvalReport],
    out_prefix: str,
    curve_rows_by_seed: dict[int, list[dict]] | None = None,
) -> dict[str, str]:
    """Write CSV + JSON (+ long-format curves) and return the paths."""
    if not reports:
        raise ValueError("no reports to emit")
    os.makedirs(os.path.dirname(out_prefix) or ".", exist_ok=True)
    paths = {}
    csv_path = out_prefix + ".csv"
    with open(csv_path, "w", newline="") as fh:
        fh.write(render_report_csv(reports))
    paths["csv"] = csv_path
    json_path = out_prefix + ".json"
    rows = [r.row() for r in reports]
    if len(reports) > 1:
        rows.append(seed_mean(reports).row())
    with open(json_path, "w") as fh:
        json.dump(rows, fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths["json"] = json_path
    if curve_rows_by_seed:
        curves_path = out_prefix + "_curves.csv"
        with open(curves_path, "w", newline="") as fh:
            fh.write(render_curves_long_csv(curve_rows_by_seed))
        paths["curves"] = curves_path
    return paths
