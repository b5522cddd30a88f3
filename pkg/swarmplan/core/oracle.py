"""
Exact minimum-energy plan for desk-scale instances.

The optimal tree for a point group is found by dynamic programming over
subsets: the cost of a tree is the sum over edges of weight times the size of
the subtree below the edge, so a vertex's descendants can be split into child
blocks and solved independently. The fleet assignment is a second subset DP on
top. Both are exhaustive over the same search space as enumerating every
partition and every labeled rooted tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
import logging
import math
import time
from typing import Iterator, Sequence

from swarmplan.core.inspection_graph import ROOT, EnergyGraph, Scenario, Trajectory, build_graph, root_first_order
from swarmplan.core.swarm_planner import PlanResult
from swarmplan.errors import InstanceTooLarge
from swarmplan.models.energy_model import Environment, UavSpec
from swarmplan.models.radio_model import RadioConfig

logger = logging.getLogger(__name__)

MAX_POINTS = 8
MAX_UAVS = 3


@dataclass(frozen=True)
class OracleResult:
    optimal_cost: float
    assignment: tuple[frozenset[int], ...] | None
    trajectories: tuple[Trajectory, ...] | None
    budgets: tuple[float, ...]
    exhausted: bool = False  # True only if a cap truncated the search; never within the caps
    wall_time: float = 0.0
    uncovered: tuple[int, ...] = ()  # every point when no assignment exists

    @property
    def feasible(self) -> bool:
        return self.assignment is not None

    def to_plan_result(self) -> PlanResult:
        k_count = len(self.budgets)
        trajectories = self.trajectories or tuple(Trajectory.root_only(k) for k in range(k_count))
        return PlanResult(
            planner="oracle",
            trajectories=trajectories,
            costs=tuple(float(sum(t.cumulative.values())) for t in trajectories),
            budgets=self.budgets,
            feasible=self.feasible,
            uncovered=self.uncovered,
            wall_time=self.wall_time,
        )


class _TreeSolver:
    """Optimal rooted-tree cost over point subsets for one UAV's graph."""

    def __init__(self, graph: EnergyGraph, n_points: int) -> None:
        self.w = graph.weights
        self.graph = graph
        self.n = n_points
        self._memo: dict[tuple[int, int], tuple[float, int, int]] = {}

    def best(self, v: int, mask: int) -> float:
        return self._solve(v, mask)[0]

    def _solve(self, v: int, mask: int) -> tuple[float, int, int]:
        # Returns (cost, block containing the lowest descendant, child heading that block).
        if mask == 0:
            return (0.0, 0, 0)
        key = (v, mask)
        hit = self._memo.get(key)
        if hit is not None:
            return hit

        low = mask & -mask
        rest = mask ^ low
        best = (math.inf, 0, 0)
        sub = rest
        while True:
            block = sub | low
            size = block.bit_count()
            remainder = self._solve(v, mask ^ block)[0] if block != mask else 0.0
            bits = block
            while bits:
                bit = bits & -bits
                bits ^= bit
                c = bit.bit_length()  # point id (bit i-1 <-> point i)
                cost = self.w[v, c] * size + self._solve(c, block ^ bit)[0] + remainder
                if cost < best[0]:
                    best = (float(cost), block, c)
            if sub == 0:
                break
            sub = (sub - 1) & rest

        self._memo[key] = best
        return best

    def parents(self, mask: int) -> dict[int, int]:
        out: dict[int, int] = {}
        stack = [(ROOT, mask)]
        while stack:
            v, m = stack.pop()
            while m:
                _, block, c = self._solve(v, m)
                out[c] = v
                stack.append((c, block ^ (1 << (c - 1))))
                m ^= block
        return out


def _mask(ids: Sequence[int]) -> int:
    m = 0
    for v in ids:
        m |= 1 << (v - 1)
    return m


def _ids(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def exact_plan(
    sc: Scenario, fleet: Sequence[UavSpec], env: Environment, cfg_radio: RadioConfig
) -> OracleResult:
    n, k_count = sc.n_points, len(fleet)
    if n > MAX_POINTS or k_count > MAX_UAVS:
        raise InstanceTooLarge(f"oracle handles N <= {MAX_POINTS}, K <= {MAX_UAVS} (got N={n}, K={k_count})")
    if k_count < 1:
        raise ValueError("fleet must contain at least one UAV")
    started = time.perf_counter()
    budgets = tuple(u.energy_budget for u in fleet)

    if n == 0:
        trees = tuple(Trajectory.root_only(k) for k in range(k_count))
        return OracleResult(0.0, tuple(frozenset() for _ in fleet), trees, budgets)

    solvers = [_TreeSolver(build_graph(sc, uav, env, cfg_radio, uav_id=k), n) for k, uav in enumerate(fleet)]
    full = (1 << n) - 1

    # assign[i][S]: cheapest way for UAVs i..K-1 to cover exactly S within budgets.
    memo: dict[tuple[int, int], tuple[float, int]] = {}

    def assign(i: int, mask: int) -> tuple[float, int]:
        if i == k_count:
            return (0.0, 0) if mask == 0 else (math.inf, 0)
        key = (i, mask)
        if key in memo:
            return memo[key]
        best = (math.inf, 0)
        sub = mask
        while True:
            own = solvers[i].best(ROOT, sub)
            if own <= budgets[i]:
                rest, _ = assign(i + 1, mask ^ sub)
                if own + rest < best[0]:
                    best = (own + rest, sub)
            if sub == 0:
                break
            sub = (sub - 1) & mask
        memo[key] = best
        return best

    cost, _ = assign(0, full)
    wall = time.perf_counter() - started
    if not math.isfinite(cost):
        logger.info("oracle: no assignment satisfies the budgets")
        return OracleResult(math.inf, None, None, budgets, wall_time=wall, uncovered=sc.inspection_ids)

    groups: list[frozenset[int]] = []
    trees: list[Trajectory] = []
    mask = full
    for k in range(k_count):
        _, own = assign(k, mask)
        groups.append(_ids(own))
        trees.append(Trajectory.from_parents(k, solvers[k].parents(own), solvers[k].graph))
        mask ^= own
    return OracleResult(cost, tuple(groups), tuple(trees), budgets, wall_time=wall)


def enumerate_trees(points: Sequence[int]) -> Iterator[dict[int, int]]:
    """Every labeled tree rooted at the BS over ``points``, as parent maps."""
    pts = list(points)
    for choice in product(*[[ROOT, *[p for p in pts if p != v]] for v in pts]):
        parents = dict(zip(pts, choice))
        try:
            root_first_order(parents)
        except ValueError:
            continue
        yield parents
