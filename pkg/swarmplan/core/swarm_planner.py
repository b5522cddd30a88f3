"""
Joint trajectory assignment for the whole swarm under per-UAV energy budgets.

UAVs are served in ascending budget order. A shared budget E_i grows by delta_e
each round; in every round each remaining UAV takes the budgeted j-MST tree of
the vertices nobody else holds yet. A UAV whose tree can no longer grow inside
its own budget is retired and its vertices are claimed for good. Planning ends
when one round covers every point, or when every UAV has been retired.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
import math
import time
from typing import Sequence

import numpy as np

from swarmplan.core.inspection_graph import (
    ROOT,
    EnergyGraph,
    Scenario,
    Trajectory,
    build_graph,
    root_first_order,
    tree_cost,
    visit_increment,
)
from swarmplan.core.jmst import CostMode, JmstConfig, PrimGrowth
from swarmplan.errors import InfeasibleCoverage
from swarmplan.models.energy_model import Environment, UavSpec
from swarmplan.models.radio_model import RadioConfig

logger = logging.getLogger(__name__)

UNLIMITED_DELTA_E = 100.0
DELTA_E_FRACTION = 0.01
COST_RTOL = 1e-6


@dataclass(frozen=True)
class PlannerConfig:
    delta_e: float | None = None  # None: 1% of the smallest finite budget, 100 J when none
    lam: float = 2.0
    budget_overrides: tuple[float, ...] | None = None
    max_vertices: int | None = None
    cost_mode: CostMode = "cumulative"

    def __post_init__(self) -> None:
        if self.delta_e is not None and not self.delta_e > 0:
            raise ValueError("delta_e must be > 0")
        if not self.lam >= 1:
            raise ValueError("lambda must be >= 1")
        if self.budget_overrides is not None:
            object.__setattr__(self, "budget_overrides", tuple(float(b) for b in self.budget_overrides))
            if any(math.isnan(b) or b < 0 for b in self.budget_overrides):
                raise ValueError("budget overrides must be >= 0")

    @property
    def jmst(self) -> JmstConfig:
        return JmstConfig(lam=self.lam, max_vertices=self.max_vertices, cost_mode=self.cost_mode)


@dataclass(frozen=True)
class PlanResult:
    planner: str
    trajectories: tuple[Trajectory, ...]
    costs: tuple[float, ...]
    budgets: tuple[float, ...]
    feasible: bool
    uncovered: tuple[int, ...] = ()
    iterations: int = 0
    rounds_evaluated: int = 0
    wall_time: float = 0.0
    delta_e: float | None = None
    budget_violations: tuple[int, ...] = ()

    @property
    def total_cost(self) -> float:
        return float(sum(self.costs))

    @property
    def fleet_size(self) -> int:
        return len(self.trajectories)


@dataclass(frozen=True)
class FeasibilityReport:
    missing: tuple[int, ...] = ()
    overlaps: tuple[tuple[int, tuple[int, ...]], ...] = ()
    budget_violations: tuple[tuple[int, float, float], ...] = ()
    cost_mismatches: tuple[tuple[int, float, float], ...] = ()
    structure_errors: tuple[str, ...] = ()
    recomputed_costs: tuple[float, ...] = field(default_factory=tuple)

    @property
    def coverage_ok(self) -> bool:
        return not self.missing

    @property
    def disjoint_ok(self) -> bool:
        return not self.overlaps

    @property
    def budgets_ok(self) -> bool:
        return not self.budget_violations

    @property
    def ok(self) -> bool:
        return (
            self.coverage_ok
            and self.disjoint_ok
            and self.budgets_ok
            and not self.cost_mismatches
            and not self.structure_errors
        )

    def problems(self) -> list[str]:
        out = list(self.structure_errors)
        if self.missing:
            out.append(f"uncovered points: {list(self.missing)}")
        for v, owners in self.overlaps:
            out.append(f"point {v} assigned to uavs {list(owners)}")
        for k, cost, budget in self.budget_violations:
            out.append(f"uav {k} cost {cost:.6g} J exceeds budget {budget:.6g} J")
        for k, stored, recomputed in self.cost_mismatches:
            out.append(f"uav {k} stored cost {stored:.12g} J != recomputed {recomputed:.12g} J")
        return out


def _full_tree_cost(graph: EnergyGraph) -> float:
    growth = PrimGrowth(graph)
    return growth.cost(growth.capacity)


def effective_budgets(
    fleet: Sequence[UavSpec], graphs: Sequence[EnergyGraph], cfg: PlannerConfig
) -> tuple[float, ...]:
    """Per-UAV E_th with unlimited entries replaced by a per-scenario sentinel."""
    raw = list(cfg.budget_overrides) if cfg.budget_overrides is not None else [u.energy_budget for u in fleet]
    if len(raw) != len(fleet):
        raise ValueError(f"{len(raw)} budgets for a fleet of {len(fleet)}")
    if all(math.isfinite(b) for b in raw):
        return tuple(raw)
    # Large enough that retirement only happens after full coverage.
    sentinel = len(fleet) * max(_full_tree_cost(g) for g in graphs)
    return tuple(b if math.isfinite(b) else sentinel for b in raw)


def default_delta_e(fleet: Sequence[UavSpec], cfg: PlannerConfig) -> float:
    if cfg.delta_e is not None:
        return cfg.delta_e
    raw = list(cfg.budget_overrides) if cfg.budget_overrides is not None else [u.energy_budget for u in fleet]
    finite = [b for b in raw if math.isfinite(b) and b > 0]
    if not finite:
        return UNLIMITED_DELTA_E
    return DELTA_E_FRACTION * min(finite)


def plan(
    sc: Scenario,
    fleet: Sequence[UavSpec],
    env: Environment,
    cfg_radio: RadioConfig,
    cfg_planner: PlannerConfig = PlannerConfig(),
    *,
    strict: bool = False,
) -> PlanResult:
    if not fleet:
        raise ValueError("fleet must contain at least one UAV")
    started = time.perf_counter()
    k_count = len(fleet)

    if sc.n_points == 0:
        empty = tuple(Trajectory.root_only(k) for k in range(k_count))
        return PlanResult(
            planner="proposed",
            trajectories=empty,
            costs=(0.0,) * k_count,
            budgets=tuple(u.energy_budget for u in fleet),
            feasible=True,
        )

    graphs = [build_graph(sc, uav, env, cfg_radio, uav_id=k) for k, uav in enumerate(fleet)]
    budgets = effective_budgets(fleet, graphs, cfg_planner)
    delta_e = default_delta_e(fleet, cfg_planner)
    jcfg = cfg_planner.jmst
    lam = jcfg.lam

    active = sorted(range(k_count), key=lambda k: (budgets[k], k))
    claimed = np.zeros(len(sc.points), dtype=bool)
    claimed[ROOT] = True
    final: dict[int, Trajectory] = {}
    tentative: dict[int, Trajectory] = {}
    cache: dict[tuple[int, bytes], PrimGrowth] = {}

    round_idx = 0
    evaluated = 0
    uncovered: list[int] = []
    while True:
        round_idx += 1
        evaluated += 1
        budget_i = round_idx * delta_e

        residual = ~claimed
        next_cache: dict[tuple[int, bytes], PrimGrowth] = {}
        tentative = {}
        retired_now = False
        next_event = math.inf

        for k in list(active):
            key = (k, residual.tobytes())
            growth = cache.get(key) or next_cache.get(key) or PrimGrowth(graphs[k], residual)
            next_cache[key] = growth

            size = growth.affordable_prefix(lam * budget_i, max_vertices=jcfg.max_vertices, mode=jcfg.cost_mode)
            candidate = growth.tree(size)
            cost = tree_cost(candidate)

            if cost <= budgets[k]:
                held = candidate
            else:
                # Keep the largest prefix of the same growth that fits E_th(k).
                held = growth.tree(growth.affordable_prefix(budgets[k], max_vertices=size))

            if cost + delta_e > budgets[k] or budget_i >= budgets[k]:
                final[k] = held
                claimed[list(held.inspected)] = True
                active.remove(k)
                retired_now = True
                logger.debug("round %d: uav %d retired with %d point(s), cost %.1f J", round_idx, k, len(held.inspected), tree_cost(held))
            else:
                tentative[k] = held
                if jcfg.max_vertices is None or size < jcfg.max_vertices:
                    next_event = min(next_event, growth.next_cost(size, jcfg.cost_mode) / lam)
                next_event = min(next_event, budgets[k])

            residual = residual.copy()
            residual[list(held.inspected)] = False

        cache = next_cache
        uncovered = [int(v) for v in np.flatnonzero(residual)]
        if not uncovered or not active:
            break

        if not retired_now and math.isfinite(next_event):
            # Rounds before the next threshold would repeat this one exactly.
            target = math.ceil(next_event / delta_e) - 1
            if target > round_idx + 1:
                round_idx = target - 1

    trajectories = tuple(
        final[k] if k in final else tentative.get(k, Trajectory.root_only(k)) for k in range(k_count)
    )
    costs = tuple(tree_cost(t) for t in trajectories)
    feasible = not uncovered
    wall = time.perf_counter() - started

    if not feasible:
        logger.warning("infeasible coverage: %d point(s) uncovered after %d rounds", len(uncovered), round_idx)
        if strict:
            raise InfeasibleCoverage(uncovered)
    logger.debug(
        "planned %d points with %d uavs: %d rounds (%d evaluated), total cost %.1f J in %.3f s",
        sc.n_points,
        k_count,
        round_idx,
        evaluated,
        sum(costs),
        wall,
    )
    return PlanResult(
        planner="proposed",
        trajectories=trajectories,
        costs=costs,
        budgets=budgets,
        feasible=feasible,
        uncovered=tuple(uncovered),
        iterations=round_idx,
        rounds_evaluated=evaluated,
        wall_time=wall,
        delta_e=delta_e,
    )


def recompute_cost(
    t: Trajectory, sc: Scenario, uav: UavSpec, env: Environment, cfg_radio: RadioConfig
) -> float:
    """Tree cost rebuilt from the raw models, ignoring stored energies and order."""
    cumulative = {ROOT: 0.0}
    total = 0.0
    for v in root_first_order(t.parents)[1:]:
        u = t.parents[v]
        cumulative[v] = cumulative[u] + visit_increment(uav, env, cfg_radio, sc.points[u], sc.points[v], sc.shadow(v))
        total += cumulative[v]
    return total


def _validation_budgets(
    sc: Scenario,
    fleet: Sequence[UavSpec],
    env: Environment,
    cfg_radio: RadioConfig,
    budgets: Sequence[float] | None,
) -> tuple[float, ...]:
    raw = tuple(float(b) for b in budgets) if budgets is not None else tuple(u.energy_budget for u in fleet)
    if len(raw) != len(fleet):
        raise ValueError(f"{len(raw)} budgets for a fleet of {len(fleet)}")
    if all(math.isfinite(b) for b in raw) or sc.n_points == 0:
        return raw
    graphs = [build_graph(sc, uav, env, cfg_radio, uav_id=k) for k, uav in enumerate(fleet)]
    return effective_budgets(fleet, graphs, PlannerConfig(budget_overrides=raw))


def validate(
    sc: Scenario,
    fleet: Sequence[UavSpec],
    result: PlanResult,
    env: Environment,
    cfg_radio: RadioConfig,
    *,
    enforce_budgets: bool = True,
    budgets: Sequence[float] | None = None,
    rtol: float = COST_RTOL,
) -> FeasibilityReport:
    """
    Check a plan against the scenario and fleet alone.

    E_th comes from ``budgets`` when given, else from the fleet; the budgets
    stored on ``result`` are never trusted. Unlimited entries are checked
    against the same per-scenario sentinel the planner uses.
    """
    structure: list[str] = []
    if len(result.trajectories) != len(fleet):
        structure.append(f"{len(result.trajectories)} trajectories for a fleet of {len(fleet)}")

    owners: dict[int, list[int]] = {}
    recomputed: list[float] = []
    mismatches: list[tuple[int, float, float]] = []
    violations: list[tuple[int, float, float]] = []
    limits: tuple[float, ...] = ()
    if enforce_budgets:
        limits = _validation_budgets(sc, fleet, env, cfg_radio, budgets)

    for k, (t, uav) in enumerate(zip(result.trajectories, fleet)):
        bad = [v for v in t.parents if not 0 < v < len(sc.points)]
        if bad:
            structure.append(f"uav {k} references unknown points {bad}")
            recomputed.append(math.nan)
            continue
        try:
            root_first_order(t.parents)
        except ValueError as e:
            structure.append(f"uav {k}: {e}")
            recomputed.append(math.nan)
            continue
        for v in t.inspected:
            owners.setdefault(v, []).append(k)

        cost = recompute_cost(t, sc, uav, env, cfg_radio)
        recomputed.append(cost)
        stored = result.costs[k] if k < len(result.costs) else math.nan
        if not math.isclose(stored, cost, rel_tol=rtol, abs_tol=1e-9):
            mismatches.append((k, stored, cost))
        if enforce_budgets and cost > limits[k] * (1 + 1e-12):
            violations.append((k, cost, limits[k]))

    missing = tuple(v for v in sc.inspection_ids if v not in owners)
    overlaps = tuple((v, tuple(ks)) for v, ks in sorted(owners.items()) if len(ks) > 1)
    report = FeasibilityReport(
        missing=missing,
        overlaps=overlaps,
        budget_violations=tuple(violations),
        cost_mismatches=tuple(mismatches),
        structure_errors=tuple(structure),
        recomputed_costs=tuple(recomputed),
    )
    for problem in report.problems():
        logger.error("validation (%s): %s", result.planner, problem)
    return report

