"""
Distance-based baseline: every UAV leaves the BS towards a random point, then
keeps claiming the nearest unclaimed point each time it finishes one. Budgets
are ignored while planning and only reported afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import heapq
import logging
import time
from typing import Sequence

import numpy as np

from swarmplan.core.inspection_graph import ROOT, Scenario, Trajectory, build_graph, tree_cost
from swarmplan.core.swarm_planner import PlanResult
from swarmplan.models.energy_model import Environment, UavSpec
from swarmplan.models.radio_model import RadioConfig, airtime

logger = logging.getLogger(__name__)


@dataclass
class BaselineState:
    location: list[int]
    routes: list[list[int]]
    unclaimed: set[int]
    clock: list[float]
    claimed_by: dict[int, int] = field(default_factory=dict)

    @classmethod
    def start(cls, sc: Scenario, k_count: int) -> "BaselineState":
        return cls(
            location=[ROOT] * k_count,
            routes=[[] for _ in range(k_count)],
            unclaimed=set(sc.inspection_ids),
            clock=[0.0] * k_count,
        )

    def claim(self, k: int, v: int) -> None:
        if v not in self.unclaimed:
            raise ValueError(f"point {v} already claimed")
        self.unclaimed.discard(v)
        self.claimed_by[v] = k
        self.routes[k].append(v)


def nearest_unclaimed(distances: np.ndarray, src: int, unclaimed: set[int]) -> int:
    """Euclidean-nearest unclaimed point from ``src``; ties go to the lowest id."""
    candidates = np.fromiter(sorted(unclaimed), dtype=np.int64)
    return int(candidates[np.argmin(distances[src, candidates])])


def plan_nearest_neighbor(
    sc: Scenario,
    fleet: Sequence[UavSpec],
    env: Environment,
    cfg_radio: RadioConfig,
    seed: int,
    *,
    first_targets: Sequence[int | None] | None = None,
) -> PlanResult:
    """
    Event-driven nearest-neighbour claiming.

    ``first_targets`` pins the first target of individual UAVs (None entries
    fall back to the seeded random draw).
    """
    if not fleet:
        raise ValueError("fleet must contain at least one UAV")
    started = time.perf_counter()
    k_count = len(fleet)
    rng = np.random.default_rng(seed)
    state = BaselineState.start(sc, k_count)
    tau = airtime(cfg_radio)
    xy = sc.coordinates()
    distances = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])

    # (completion time, uav index): simultaneous completions resolve by UAV index.
    events: list[tuple[float, int]] = []

    def dispatch(k: int, v: int, now: float) -> None:
        state.claim(k, v)
        src = state.location[k]
        done = now + distances[src, v] / fleet[k].ground_speed + tau
        state.location[k] = v
        state.clock[k] = done
        heapq.heappush(events, (done, k))

    for k in range(k_count):
        if not state.unclaimed:
            break
        pinned = first_targets[k] if first_targets is not None and k < len(first_targets) else None
        if pinned is not None:
            target = int(pinned)
        else:
            pool = sorted(state.unclaimed)
            target = pool[int(rng.integers(len(pool)))]
        dispatch(k, target, 0.0)

    while events and state.unclaimed:
        now, k = heapq.heappop(events)
        dispatch(k, nearest_unclaimed(distances, state.location[k], state.unclaimed), now)

    trajectories: list[Trajectory] = []
    budgets = tuple(u.energy_budget for u in fleet)
    for k, uav in enumerate(fleet):
        if state.routes[k]:
            graph = build_graph(sc, uav, env, cfg_radio, uav_id=k)
            trajectories.append(Trajectory.chain(k, state.routes[k], graph))
        else:
            trajectories.append(Trajectory.root_only(k))
    costs = tuple(tree_cost(t) for t in trajectories)
    over = tuple(k for k, (c, b) in enumerate(zip(costs, budgets)) if c > b)
    if over:
        logger.info("baseline exceeds the energy budget of uav(s) %s", list(over))

    return PlanResult(
        planner="baseline",
        trajectories=tuple(trajectories),
        costs=costs,
        budgets=budgets,
        feasible=not state.unclaimed,
        uncovered=tuple(sorted(state.unclaimed)),
        iterations=len(state.claimed_by),
        rounds_evaluated=len(state.claimed_by),
        wall_time=time.perf_counter() - started,
        budget_violations=over,
    )

