"""
Realized-route metrics: a trajectory tree is flown in depth-first preorder with
straight point-to-point legs (no retracing), and every visit dwells tau = B/R_th
to record and upload.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
from typing import Sequence

import numpy as np

from swarmplan.core.inspection_graph import ROOT, Scenario, Trajectory
from swarmplan.core.swarm_planner import PlanResult
from swarmplan.errors import EmptySample
from swarmplan.models.energy_model import Environment, UavSpec, flight_energy
from swarmplan.models.radio_model import RadioConfig, airtime, dwell_energy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UavMetrics:
    uav_id: int
    points: int
    flight_energy: float
    hover_plus_tx_energy: float
    planning_cost: float
    flight_distance: float
    completion_time: float

    @property
    def total_energy(self) -> float:
        return self.flight_energy + self.hover_plus_tx_energy


@dataclass(frozen=True)
class MetricsReport:
    total_energy: float
    flight_energy: float
    hover_plus_tx_energy: float
    planning_cost: float
    inspection_time: float
    per_uav: tuple[UavMetrics, ...]
    feasible: bool


def traversal_order(t: Trajectory) -> list[int]:
    """Depth-first preorder from the BS, children in ascending point id."""
    order: list[int] = []
    stack = [ROOT]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(reversed(t.children(v)))
    return order


def _route(t: Trajectory) -> list[int]:
    return traversal_order(t)[1:]


def route_completion_times(sc: Scenario, uav: UavSpec, route: Sequence[int], tau: float) -> list[float]:
    out: list[float] = []
    clock = 0.0
    prev = sc.bs
    for v in route:
        p = sc.points[v]
        clock += prev.distance_to(p) / uav.ground_speed + tau
        out.append(clock)
        prev = p
    return out


def route_flight_distance(sc: Scenario, route: Sequence[int]) -> float:
    total = 0.0
    prev = sc.bs
    for v in route:
        total += prev.distance_to(sc.points[v])
        prev = sc.points[v]
    return total


def inspection_time(
    plans: PlanResult, sc: Scenario, fleet: Sequence[UavSpec], env: Environment, cfg_radio: RadioConfig
) -> float:
    """Time until every planned point has been visited and uploaded once; 0 for an empty plan."""
    tau = airtime(cfg_radio)
    latest = 0.0
    for t, uav in zip(plans.trajectories, fleet):
        times = route_completion_times(sc, uav, _route(t), tau)
        if times:
            latest = max(latest, max(times))
    return latest


def energy_breakdown(
    plans: PlanResult, sc: Scenario, fleet: Sequence[UavSpec], env: Environment, cfg_radio: RadioConfig
) -> MetricsReport:
    tau = airtime(cfg_radio)
    per_uav: list[UavMetrics] = []
    for k, (t, uav) in enumerate(zip(plans.trajectories, fleet)):
        route = _route(t)
        distance = 0.0
        flight = 0.0
        prev = sc.bs
        for v in route:
            leg = prev.distance_to(sc.points[v])
            distance += leg
            flight += flight_energy(uav, env, leg)
            prev = sc.points[v]
        dwell = sum(dwell_energy(uav, env, sc.points[v], cfg_radio, sc.shadow(v)) for v in route)
        times = route_completion_times(sc, uav, route, tau)
        per_uav.append(
            UavMetrics(
                uav_id=k,
                points=len(route),
                flight_energy=flight,
                hover_plus_tx_energy=dwell,
                planning_cost=plans.costs[k] if k < len(plans.costs) else 0.0,
                flight_distance=distance,
                completion_time=max(times) if times else 0.0,
            )
        )

    flight_total = float(sum(m.flight_energy for m in per_uav))
    dwell_total = float(sum(m.hover_plus_tx_energy for m in per_uav))
    return MetricsReport(
        total_energy=flight_total + dwell_total,
        flight_energy=flight_total,
        hover_plus_tx_energy=dwell_total,
        planning_cost=float(sum(m.planning_cost for m in per_uav)),
        inspection_time=max((m.completion_time for m in per_uav), default=0.0),
        per_uav=tuple(per_uav),
        feasible=plans.feasible,
    )


def empirical_cdf(samples: Sequence[float]) -> list[tuple[float, float]]:
    """Right-continuous empirical CDF as sorted (value, P[X <= value]) steps."""
    arr = np.asarray(list(samples), dtype=float)
    if arr.size == 0:
        raise EmptySample("empirical CDF needs at least one sample")
    values, counts = np.unique(arr, return_counts=True)
    probs = np.cumsum(counts) / arr.size
    return [(float(v), float(p)) for v, p in zip(values, probs)]


def cdf_at(samples: Sequence[float], t: float) -> float:
    arr = np.asarray(list(samples), dtype=float)
    if arr.size == 0:
        raise EmptySample("empirical CDF needs at least one sample")
    return float(np.count_nonzero(arr <= t) / arr.size)


def reduction(proposed: float, baseline: float) -> float:
    """Relative saving of ``proposed`` against ``baseline`` (0.45 == 45 % lower)."""
    if baseline == 0:
        return 0.0
    return 1.0 - proposed / baseline
