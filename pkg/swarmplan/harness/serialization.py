from __future__ import annotations

from dataclasses import asdict, fields
import json
import math
from pathlib import Path
from typing import Any

from swarmplan.core.inspection_graph import ROOT, Scenario, Trajectory, root_first_order
from swarmplan.core.sim_metrics import MetricsReport
from swarmplan.core.swarm_planner import FeasibilityReport, PlanResult
from swarmplan.errors import ConfigError
from swarmplan.models.energy_model import UavSpec
from swarmplan.models.radio_model import Point


def _num(x: float) -> float | str:
    # JSON has no infinity; unlimited budgets are written as a string.
    return "unlimited" if math.isinf(x) else x


def _unnum(x: Any) -> float:
    return math.inf if x in ("unlimited", None) else float(x)


def scenario_to_dict(sc: Scenario) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "seed": sc.seed,
        "area": {"w": sc.area[0], "h": sc.area[1]},
        "points": [{"id": p.id, "x1": p.x1, "x2": p.x2} for p in sc.points],
    }
    if sc.shadow_db is not None:
        obj["shadow_db"] = list(sc.shadow_db)
    return obj


def scenario_from_dict(obj: dict[str, Any]) -> Scenario:
    try:
        points = tuple(Point(float(p["x1"]), float(p["x2"]), int(p["id"])) for p in obj["points"])
        points = tuple(sorted(points, key=lambda p: p.id))
        area = (float(obj["area"]["w"]), float(obj["area"]["h"]))
        shadow = obj.get("shadow_db")
        return Scenario(points=points, area=area, seed=int(obj.get("seed", 0)), shadow_db=shadow)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"invalid scenario document: {e}") from e


def fleet_to_dict(fleet: list[UavSpec] | tuple[UavSpec, ...]) -> list[dict[str, Any]]:
    out = []
    for uav in fleet:
        d = asdict(uav)
        d["energy_budget"] = _num(uav.energy_budget)
        out.append(d)
    return out


def fleet_from_dict(items: list[dict[str, Any]]) -> list[UavSpec]:
    names = {f.name for f in fields(UavSpec)}
    try:
        fleet = []
        for d in items:
            values = {k: v for k, v in d.items() if k in names}
            values["energy_budget"] = _unnum(d.get("energy_budget"))
            fleet.append(UavSpec(**values))
        return fleet
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid fleet document: {e}") from e


def trajectory_to_dict(t: Trajectory, cost: float, budget: float) -> dict[str, Any]:
    return {
        "uav_id": t.uav_id,
        "vertices": list(t.order),
        "parents": [t.parents.get(v, -1) for v in t.order],
        "cumulative_J": [t.cumulative[v] for v in t.order],
        "cost_J": cost,
        "budget_J": _num(budget),
    }


def trajectory_from_dict(obj: dict[str, Any]) -> Trajectory:
    vertices = [int(v) for v in obj["vertices"]]
    parents = [int(p) for p in obj["parents"]]
    cumulative = [float(c) for c in obj["cumulative_J"]]
    if not vertices or vertices[0] != ROOT or not (len(vertices) == len(parents) == len(cumulative)):
        raise ConfigError(f"malformed trajectory for uav {obj.get('uav_id')}")
    if len(set(vertices)) != len(vertices):
        raise ConfigError(f"trajectory for uav {obj.get('uav_id')} lists a vertex twice")
    parent_of = {v: p for v, p in zip(vertices[1:], parents[1:])}
    seen = {ROOT}
    for v in vertices[1:]:
        if parent_of[v] not in seen:
            # stored order is not root-first; derive one from the parent array
            try:
                order = root_first_order(parent_of)
            except ValueError as e:
                raise ConfigError(f"trajectory for uav {obj.get('uav_id')}: {e}") from e
            break
        seen.add(v)
    else:
        order = tuple(vertices)
    return Trajectory(
        uav_id=int(obj["uav_id"]),
        parents=parent_of,
        cumulative=dict(zip(vertices, cumulative)),
        order=order,
    )


def plan_to_dict(result: PlanResult) -> dict[str, Any]:
    return {
        "planner": result.planner,
        "feasible": result.feasible,
        "uncovered": list(result.uncovered),
        "iterations": result.iterations,
        "rounds_evaluated": result.rounds_evaluated,
        "wall_time_s": result.wall_time,
        "delta_e_J": result.delta_e,
        "total_cost_J": result.total_cost,
        "budget_violations": list(result.budget_violations),
        "uavs": [
            trajectory_to_dict(t, c, b) for t, c, b in zip(result.trajectories, result.costs, result.budgets)
        ],
    }


def plan_from_dict(obj: dict[str, Any]) -> PlanResult:
    try:
        uavs = obj["uavs"]
        return PlanResult(
            planner=str(obj.get("planner", "proposed")),
            trajectories=tuple(trajectory_from_dict(u) for u in uavs),
            costs=tuple(float(u["cost_J"]) for u in uavs),
            budgets=tuple(_unnum(u.get("budget_J")) for u in uavs),
            feasible=bool(obj["feasible"]),
            uncovered=tuple(int(v) for v in obj.get("uncovered", [])),
            iterations=int(obj.get("iterations", 0)),
            rounds_evaluated=int(obj.get("rounds_evaluated", 0)),
            wall_time=float(obj.get("wall_time_s", 0.0)),
            delta_e=obj.get("delta_e_J"),
            budget_violations=tuple(int(k) for k in obj.get("budget_violations", [])),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"invalid plan document: {e}") from e


def report_to_dict(report: FeasibilityReport) -> dict[str, Any]:
    return {
        "ok": report.ok,
        "coverage_ok": report.coverage_ok,
        "disjoint_ok": report.disjoint_ok,
        "budgets_ok": report.budgets_ok,
        "problems": report.problems(),
        "recomputed_costs_J": list(report.recomputed_costs),
    }


def metrics_to_dict(m: MetricsReport) -> dict[str, Any]:
    return {
        "total_J": m.total_energy,
        "flight_J": m.flight_energy,
        "hover_tx_J": m.hover_plus_tx_energy,
        "planning_cost_J": m.planning_cost,
        "inspection_time_s": m.inspection_time,
        "feasible": m.feasible,
        "per_uav": [
            {
                "uav_id": u.uav_id,
                "points": u.points,
                "flight_J": u.flight_energy,
                "hover_tx_J": u.hover_plus_tx_energy,
                "planning_cost_J": u.planning_cost,
                "flight_distance_m": u.flight_distance,
                "completion_time_s": u.completion_time,
            }
            for u in m.per_uav
        ],
    }


def read_json(path: Path) -> dict[str, Any]:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return obj


def write_json(path: Path, obj: dict[str, Any]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, ensure_ascii=False, indent=2), encoding="utf-8")
