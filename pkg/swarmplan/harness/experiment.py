"""
Monte Carlo sweep over (N, K, run) cells.

Every cell derives its own seed from (base_seed, N, K, run), so the rows do not
depend on the order cells run in or on how many worker processes share them.
Aggregation happens once, after all rows are collected.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import logging
from pathlib import Path
import time
from typing import Any, Iterable

import numpy as np
import pandas as pd

from swarmplan.core.baseline_planner import plan_nearest_neighbor
from swarmplan.core.sim_metrics import MetricsReport, cdf_at, empirical_cdf, energy_breakdown, reduction
from swarmplan.core.swarm_planner import FeasibilityReport, PlanResult, plan, validate
from swarmplan.errors import ConfigError
from swarmplan.harness.config_models import ExperimentConfig
from swarmplan.harness.scenarios import cell_seed, generate_scenario, make_fleet
from swarmplan.harness.serialization import write_json

logger = logging.getLogger(__name__)

PLANNERS = ("proposed", "baseline")
ROW_COLUMNS = [
    "N",
    "K",
    "run",
    "seed",
    "planner",
    "total_J",
    "flight_J",
    "hover_tx_J",
    "planning_cost_J",
    "inspection_time_s",
    "feasible",
    "valid",
    "budget_violations",
    "plan_wall_ms",
]
TIMING_COLUMNS = ["plan_wall_ms"]
SORT_KEYS = ["N", "K", "run", "planner"]

# The energy-vs-fleet comparison is made on planning_cost_J (the tree cost the
# planner minimizes). total_J is the realized preorder-flight energy.
FIGURE_FILES = {
    "planning_cost_vs_uavs.csv": "planning_cost_J",
    "energy_vs_uavs.csv": "total_J",
    "time_vs_uavs.csv": "inspection_time_s",
    "flight_energy_vs_uavs.csv": "flight_J",
    "hover_tx_energy_vs_uavs.csv": "hover_tx_J",
}


@dataclass(frozen=True)
class Cell:
    n: int
    k: int
    run: int


@dataclass(frozen=True)
class ExperimentOutcome:
    rows: pd.DataFrame
    summary: dict[str, Any]
    output_dir: Path

    @property
    def validation_failures(self) -> int:
        return int((~self.rows["valid"]).sum())


def cells(cfg: ExperimentConfig) -> list[Cell]:
    return [
        Cell(n, k, run)
        for n in cfg.point_counts
        for k in cfg.fleet_sizes
        for run in range(cfg.runs_per_cell)
    ]


def baseline_seed(seed: int) -> int:
    # Separate stream from the scenario draw.
    return int(np.random.SeedSequence([seed, 2]).generate_state(1)[0])


def plan_is_valid(result: PlanResult, report: FeasibilityReport) -> bool:
    """
    True when the plan is internally consistent: disjoint trees, stored costs
    that match the models, budgets honoured (when checked) and an uncovered
    list that matches what is actually missing.
    """
    return (
        not report.structure_errors
        and report.disjoint_ok
        and report.budgets_ok
        and not report.cost_mismatches
        and set(report.missing) == set(result.uncovered)
    )


def _row(cell: Cell, seed: int, result: PlanResult, valid: bool, metrics: MetricsReport) -> dict[str, Any]:
    return {
        "N": cell.n,
        "K": cell.k,
        "run": cell.run,
        "seed": seed,
        "planner": result.planner,
        "total_J": metrics.total_energy,
        "flight_J": metrics.flight_energy,
        "hover_tx_J": metrics.hover_plus_tx_energy,
        "planning_cost_J": metrics.planning_cost,
        "inspection_time_s": metrics.inspection_time,
        "feasible": result.feasible,
        "valid": valid,
        "budget_violations": len(result.budget_violations),
        "plan_wall_ms": result.wall_time * 1000.0,
    }


def run_cell(cfg: ExperimentConfig, cell: Cell) -> list[dict[str, Any]]:
    """Both planners on one generated scenario; module-level so worker processes can pickle it."""
    seed = cell_seed(cfg.base_seed, cell.n, cell.k, cell.run)
    env = cfg.environment.to_env()
    radio = cfg.radio.to_radio()
    template = cfg.fleet.template
    budgets = cfg.planner.budgets_for(cell.k, template)

    sc = generate_scenario(cell.n, cfg.area, seed, radio=radio)
    fleet = make_fleet(
        cell.k,
        template.to_spec(),
        seed=seed,
        heterogeneous=cfg.fleet.heterogeneous,
        eta_range=cfg.fleet.eta_range,
        budgets=budgets,
    )

    proposed = plan(sc, fleet, env, radio, cfg.planner.to_planner())
    baseline = plan_nearest_neighbor(sc, fleet, env, radio, baseline_seed(seed))

    rows = []
    for result, enforce in ((proposed, True), (baseline, False)):
        report = validate(sc, fleet, result, env, radio, enforce_budgets=enforce)
        valid = plan_is_valid(result, report)
        rows.append(_row(cell, seed, result, valid, energy_breakdown(result, sc, fleet, env, radio)))
    return rows


def _run_cells(cfg: ExperimentConfig, todo: list[Cell], jobs: int) -> list[dict[str, Any]]:
    rows: list[dict[str, Any]] = []
    total = len(todo)
    if jobs <= 1:
        for i, cell in enumerate(todo, start=1):
            rows.extend(run_cell(cfg, cell))
            if i % 50 == 0 or i == total:
                logger.info("%d/%d cells done", i, total)
        return rows

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for i, cell_rows in enumerate(pool.map(run_cell, [cfg] * total, todo, chunksize=4), start=1):
            rows.extend(cell_rows)
            if i % 50 == 0 or i == total:
                logger.info("%d/%d cells done", i, total)
    return rows


def rows_frame(rows: Iterable[dict[str, Any]]) -> pd.DataFrame:
    df = pd.DataFrame(list(rows), columns=ROW_COLUMNS)
    return df.sort_values(SORT_KEYS, kind="mergesort").reset_index(drop=True)


def figure_means(df: pd.DataFrame, column: str) -> pd.DataFrame:
    """Mean/std of ``column`` per (N, K, planner) over feasible runs."""
    ok = df[df["feasible"]]
    grouped = ok.groupby(["N", "K", "planner"], sort=True)[column]
    out = grouped.agg(["mean", "std", "count"]).reset_index()
    out = out.rename(columns={"mean": f"mean_{column}", "std": f"std_{column}", "count": "runs"})
    return out


def cdf_frame(df: pd.DataFrame) -> pd.DataFrame:
    parts = []
    for (n, k, planner), group in df[df["feasible"]].groupby(["N", "K", "planner"], sort=True):
        for value, prob in empirical_cdf(group["inspection_time_s"].tolist()):
            parts.append({"N": n, "K": k, "planner": planner, "inspection_time_s": value, "probability": prob})
    return pd.DataFrame(parts, columns=["N", "K", "planner", "inspection_time_s", "probability"])


def time_vs_points(df: pd.DataFrame) -> pd.DataFrame:
    out = figure_means(df, "inspection_time_s")
    return out.sort_values(["K", "planner", "N"], kind="mergesort").reset_index(drop=True)


def summarize(df: pd.DataFrame, cfg: ExperimentConfig) -> dict[str, Any]:
    means: list[dict[str, Any]] = []
    reductions: list[dict[str, Any]] = []
    cdf_targets: list[dict[str, Any]] = []
    ok = df[df["feasible"]]

    for (n, k), group in ok.groupby(["N", "K"], sort=True):
        per: dict[str, dict[str, float]] = {}
        for planner, sub in group.groupby("planner", sort=True):
            per[planner] = {
                "total_J": float(sub["total_J"].mean()),
                "flight_J": float(sub["flight_J"].mean()),
                "hover_tx_J": float(sub["hover_tx_J"].mean()),
                "planning_cost_J": float(sub["planning_cost_J"].mean()),
                "inspection_time_s": float(sub["inspection_time_s"].mean()),
                "runs": int(len(sub)),
            }
            means.append({"N": int(n), "K": int(k), "planner": planner, **per[planner]})
            target = cfg.cdf_targets.get(int(n))
            if target is not None:
                cdf_targets.append(
                    {
                        "N": int(n),
                        "K": int(k),
                        "planner": planner,
                        "target_s": float(target),
                        "probability": cdf_at(sub["inspection_time_s"].tolist(), target),
                    }
                )
        if all(p in per for p in PLANNERS):
            p, b = per["proposed"], per["baseline"]
            reductions.append(
                {
                    "N": int(n),
                    "K": int(k),
                    "planning_cost": reduction(p["planning_cost_J"], b["planning_cost_J"]),
                    "total_energy": reduction(p["total_J"], b["total_J"]),
                    "flight_energy": reduction(p["flight_J"], b["flight_J"]),
                    "hover_tx_energy": reduction(p["hover_tx_J"], b["hover_tx_J"]),
                    "inspection_time": reduction(p["inspection_time_s"], b["inspection_time_s"]),
                }
            )

    return {
        "rows": int(len(df)),
        "infeasible_rows": int((~df["feasible"]).sum()),
        "validation_failures": int((~df["valid"]).sum()),
        "means": means,
        "reductions": reductions,
        "cdf_targets": cdf_targets,
        "config": cfg.model_dump(mode="json", by_alias=True),
    }


def write_outputs(df: pd.DataFrame, summary: dict[str, Any], out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    df.to_csv(out_dir / "results.csv", index=False, float_format="%.17g")
    for name, column in FIGURE_FILES.items():
        figure_means(df, column).to_csv(out_dir / name, index=False, float_format="%.17g")
    cdf_frame(df).to_csv(out_dir / "time_cdf.csv", index=False, float_format="%.17g")
    time_vs_points(df).to_csv(out_dir / "time_vs_points.csv", index=False, float_format="%.17g")
    write_json(out_dir / "summary.json", summary)


def run_experiment(
    cfg: ExperimentConfig, *, output_dir: Path | None = None, jobs: int | None = None
) -> ExperimentOutcome:
    out_dir = Path(output_dir if output_dir is not None else cfg.output_dir)
    workers = jobs if jobs is not None else cfg.jobs
    todo = cells(cfg)
    # Fail fast on a budget list too short for the largest fleet.
    for k in cfg.fleet_sizes:
        cfg.planner.budgets_for(k, cfg.fleet.template)

    logger.info(
        "experiment: N=%s K=%s runs=%d (%d cells, %d worker(s)) -> %s",
        cfg.point_counts,
        cfg.fleet_sizes,
        cfg.runs_per_cell,
        len(todo),
        workers,
        out_dir,
    )
    started = time.perf_counter()
    df = rows_frame(_run_cells(cfg, todo, workers))
    summary = summarize(df, cfg)
    write_outputs(df, summary, out_dir)

    failures = summary["validation_failures"]
    if failures:
        logger.error("%d row(s) failed validation", failures)
    logger.info("experiment finished in %.1f s", time.perf_counter() - started)
    return ExperimentOutcome(rows=df, summary=summary, output_dir=out_dir)


def preset_config(name: str, **overrides: Any) -> ExperimentConfig:
    """Named sweeps: energy and time vs fleet size, the time CDF, time vs point count, and a quick smoke run."""
    even_k = [2, 4, 6, 8, 10, 12]
    presets: dict[str, dict[str, Any]] = {
        # also yields the flight and hover+tx breakdowns
        "energy": {"point_counts": [100], "fleet_sizes": even_k, "runs_per_cell": 50},
        "time": {"point_counts": [100, 200], "fleet_sizes": even_k, "runs_per_cell": 50},
        "cdf": {"point_counts": [100, 200], "fleet_sizes": [20], "runs_per_cell": 200},
        "points": {"point_counts": [25, 50, 75, 100, 125, 150, 175, 200], "fleet_sizes": [10], "runs_per_cell": 50},
        "smoke": {"point_counts": [10], "fleet_sizes": [2, 3], "runs_per_cell": 2},
    }
    if name not in presets:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(presets)}")
    return ExperimentConfig.model_validate({**presets[name], **overrides})
