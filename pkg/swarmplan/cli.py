"""
Command-line entry point.

    python -m swarmplan scenario --points 100 --seed 7 --out sc.json
    python -m swarmplan plan sc.json --uavs 4 --out plan.json
    python -m swarmplan baseline sc.json --uavs 4 --seed 3 --out base.json
    python -m swarmplan oracle sc.json --uavs 2
    python -m swarmplan validate plan.json sc.json
    python -m swarmplan experiment --preset smoke --out results/smoke

Exit codes: 0 success, 1 validation failure, 2 configuration or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
from pathlib import Path
import sys
from typing import Any, Sequence

from pydantic import ValidationError

from swarmplan.config import load_config
from swarmplan.core.baseline_planner import plan_nearest_neighbor
from swarmplan.core.oracle import exact_plan
from swarmplan.core.sim_metrics import energy_breakdown
from swarmplan.core.swarm_planner import PlanResult, plan, validate
from swarmplan.errors import ConfigError, InstanceTooLarge, ValidationFailure
from swarmplan.harness.config_models import ExperimentConfig, RunConfig, load_model
from swarmplan.harness.experiment import plan_is_valid, preset_config, run_experiment
from swarmplan.harness.scenarios import generate_scenario, make_fleet
from swarmplan.harness.serialization import (
    fleet_from_dict,
    fleet_to_dict,
    metrics_to_dict,
    plan_from_dict,
    plan_to_dict,
    read_json,
    report_to_dict,
    scenario_from_dict,
    scenario_to_dict,
    write_json,
)
from swarmplan.logging_setup import configure_logging
from swarmplan.models.energy_model import UavSpec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CONFIG = 2


def _budget_arg(raw: str) -> float | str:
    if raw.strip().lower() == "unlimited":
        return "unlimited"
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"budget must be a number of joules or 'unlimited', got {raw!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("budget must be >= 0")
    return value


def _add_planner_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, help="j-MST approximation factor (>= 1)")
    p.add_argument("--delta-e", dest="delta_e", type=float, help="budget step per round, J")
    p.add_argument(
        "--budget",
        nargs="+",
        type=_budget_arg,
        help="E_th in J: one value for every UAV, one per UAV, or 'unlimited'",
    )


def _add_fleet_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="run configuration JSON (fleet, environment, radio, planner)")
    p.add_argument("--uavs", type=int, help="fleet size K")
    p.add_argument("--seed", type=int, default=0, help="seed for the fleet draw (and the baseline's first targets)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmplan", description="Energy-minimal UAV swarm inspection planning")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR (default: SWARMPLAN_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scenario", help="generate a random scenario JSON")
    p.add_argument("--points", type=int, required=True, help="number of inspection points N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--area", type=float, nargs=2, default=(200.0, 200.0), metavar=("W", "H"))
    p.add_argument("--config", type=Path, help="run configuration JSON (radio shadowing and BS location)")
    p.add_argument("--out", type=Path)

    for name, help_text in (
        ("plan", "plan with the budgeted j-MST swarm planner"),
        ("baseline", "plan with the nearest-neighbour baseline"),
        ("oracle", "exact optimum for small instances (N <= 8, K <= 3)"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("scenario", type=Path)
        _add_fleet_flags(p)
        _add_planner_flags(p)
        p.add_argument("--out", type=Path)

    p = sub.add_parser("validate", help="check a plan JSON against its scenario")
    p.add_argument("plan", type=Path)
    p.add_argument("scenario", type=Path)
    _add_fleet_flags(p)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("experiment", help="run a Monte Carlo sweep and write CSV + summary JSON")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", type=Path, help="experiment configuration JSON")
    src.add_argument("--preset", choices=["energy", "time", "cdf", "points", "smoke"])
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--runs", type=int, help="runs per (N, K) cell")
    p.add_argument("--jobs", type=int, help="parallel worker processes (default: SWARMPLAN_JOBS)")
    p.add_argument("--out", type=Path, help="output directory (default: SWARMPLAN_RESULTS_DIR/<preset>)")
    _add_planner_flags(p)
    return parser


def _planner_overrides(args: argparse.Namespace) -> dict[str, Any]:
    out: dict[str, Any] = {}
    if getattr(args, "lam", None) is not None:
        out["lambda"] = args.lam
    if getattr(args, "delta_e", None) is not None:
        out["delta_e"] = args.delta_e
    budget = getattr(args, "budget", None)
    if budget:
        out["budget"] = budget[0] if len(budget) == 1 else list(budget)
    return out


def _with_overrides(model: RunConfig | ExperimentConfig, top: dict[str, Any], planner: dict[str, Any]):
    data = model.model_dump(by_alias=True)
    data.update(top)
    data["planner"] = {**data["planner"], **planner}
    return type(model).model_validate(data)


def _run_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_model(args.config, RunConfig) if args.config else RunConfig()
    top = {"uavs": args.uavs} if args.uavs is not None else {}
    return _with_overrides(cfg, top, _planner_overrides(args))


def _fleet(cfg: RunConfig, seed: int) -> list[UavSpec]:
    budgets = cfg.planner.budgets_for(cfg.uavs, cfg.fleet.template)
    return make_fleet(
        cfg.uavs,
        cfg.fleet.template.to_spec(),
        seed=seed,
        heterogeneous=cfg.fleet.heterogeneous,
        eta_range=cfg.fleet.eta_range,
        budgets=budgets,
    )


def _emit(obj: dict[str, Any], out: Path | None) -> None:
    if out is None:
        sys.stdout.write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n")
    else:
        write_json(out, obj)
        logger.info("wrote %s", out)


def _cmd_scenario(args: argparse.Namespace) -> int:
    if args.points < 0:
        raise ConfigError("--points must be >= 0")
    cfg = load_model(args.config, RunConfig) if args.config else RunConfig()
    sc = generate_scenario(args.points, tuple(args.area), args.seed, radio=cfg.radio.to_radio())
    _emit(scenario_to_dict(sc), args.out)
    return EXIT_OK


def _cmd_plan(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    sc = scenario_from_dict(read_json(args.scenario))
    env, radio = cfg.environment.to_env(), cfg.radio.to_radio()
    fleet = _fleet(cfg, args.seed)

    result: PlanResult
    if args.command == "plan":
        result = plan(sc, fleet, env, radio, cfg.planner.to_planner())
    elif args.command == "baseline":
        result = plan_nearest_neighbor(sc, fleet, env, radio, args.seed)
    else:
        oracle = exact_plan(sc, fleet, env, radio)
        result = oracle.to_plan_result()

    doc = plan_to_dict(result)
    doc["fleet"] = fleet_to_dict(fleet)
    doc["metrics"] = metrics_to_dict(energy_breakdown(result, sc, fleet, env, radio))
    _emit(doc, args.out)
    if not result.feasible:
        logger.warning("%s plan leaves %d point(s) uncovered", result.planner, len(result.uncovered))
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    cfg = _run_config(args)
    doc = read_json(args.plan)
    result = plan_from_dict(doc)
    sc = scenario_from_dict(read_json(args.scenario))
    env, radio = cfg.environment.to_env(), cfg.radio.to_radio()
    fleet = fleet_from_dict(doc["fleet"]) if "fleet" in doc else _fleet(cfg, args.seed)

    # The baseline ignores budgets by construction; its overruns are reported, not failed.
    report = validate(sc, fleet, result, env, radio, enforce_budgets=result.planner != "baseline")
    valid = plan_is_valid(result, report)
    out = report_to_dict(report)
    out["valid"] = valid
    _emit(out, args.out)
    if not valid:
        problems = "; ".join(report.problems()) or "declared uncovered points do not match"
        raise ValidationFailure(f"{result.planner} plan failed validation: {problems}")
    return EXIT_OK


def _cmd_experiment(args: argparse.Namespace) -> int:
    app = load_config()
    if args.preset:
        cfg = preset_config(args.preset)
    elif args.config:
        cfg = load_model(args.config, ExperimentConfig)
    else:
        raise ConfigError("experiment needs --config or --preset")

    top: dict[str, Any] = {}
    if args.seed is not None:
        top["base_seed"] = args.seed
    if args.runs is not None:
        top["runs_per_cell"] = args.runs
    cfg = _with_overrides(cfg, top, _planner_overrides(args))

    if args.out is not None:
        out_dir = args.out
    elif args.preset:
        out_dir = app.results_dir / args.preset
    else:
        out_dir = Path(cfg.output_dir)
    jobs = args.jobs if args.jobs is not None else max(cfg.jobs, app.jobs)

    outcome = run_experiment(cfg, output_dir=out_dir, jobs=jobs)
    if outcome.validation_failures:
        raise ValidationFailure(f"{outcome.validation_failures} run(s) failed validation; see {out_dir}")
    return EXIT_OK


COMMANDS = {
    "scenario": _cmd_scenario,
    "plan": _cmd_plan,
    "baseline": _cmd_plan,
    "oracle": _cmd_plan,
    "validate": _cmd_validate,
    "experiment": _cmd_experiment,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or load_config().log_level)
    try:
        return COMMANDS[args.command](args)
    except ValidationFailure as e:
        logger.error("%s", e)
        return EXIT_INVALID
    except (ConfigError, InstanceTooLarge) as e:
        logger.error("%s", e)
        return EXIT_CONFIG
    except ValidationError as e:
        logger.error("invalid configuration: %s", e)
        return EXIT_CONFIG
    except (OSError, KeyError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
