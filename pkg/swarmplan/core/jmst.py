"""
Budgeted j-MST: grow a Prim tree from the BS one vertex at a time and keep the
largest tree whose cost still fits within lambda times the energy budget.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
import logging
import math
from typing import Literal

import numpy as np

from swarmplan.core.inspection_graph import ROOT, EnergyGraph, Trajectory
from swarmplan.errors import InsufficientVertices

logger = logging.getLogger(__name__)

CostMode = Literal["cumulative", "edge_sum"]


@dataclass(frozen=True)
class JmstConfig:
    lam: float = 2.0
    max_vertices: int | None = None  # j; None means every available vertex
    cost_mode: CostMode = "cumulative"

    def __post_init__(self) -> None:
        if not self.lam >= 1:
            raise ValueError("lambda must be >= 1")
        if self.max_vertices is not None and self.max_vertices < 1:
            raise ValueError("max_vertices must be >= 1")
        if self.cost_mode not in ("cumulative", "edge_sum"):
            raise ValueError(f"unknown cost_mode {self.cost_mode!r}")


class PrimGrowth:
    """
    Incremental Prim from ``root`` over the vertices flagged in ``allowed``.

    Each step attaches the globally cheapest directed edge (tree -> non-tree),
    ties broken by lowest destination id, then lowest source id. Prefixes are
    nested, so Y(i) is a subtree of Y(i + 1) by construction.
    """

    def __init__(self, graph: EnergyGraph, allowed: np.ndarray | None = None, *, root: int = ROOT) -> None:
        n = graph.size
        self.graph = graph
        self.root = root
        self._available = np.ones(n, dtype=bool) if allowed is None else np.array(allowed, dtype=bool)
        self._available[root] = False
        self.capacity = int(self._available.sum())

        self._key = np.where(self._available, graph.weights[root], np.inf)
        self._parent = np.full(n, root, dtype=np.int64)

        self.order: list[int] = [root]
        self.parents: dict[int, int] = {}
        self.cumulative: dict[int, float] = {root: 0.0}
        self.cumulative_costs: list[float] = [0.0]
        self.edge_sums: list[float] = [0.0]

    @property
    def attached(self) -> int:
        return len(self.order) - 1

    def extend(self) -> bool:
        if self.attached >= self.capacity:
            return False
        v = int(np.argmin(self._key))  # first minimum == lowest id
        w = float(self._key[v])
        if not math.isfinite(w):
            return False
        u = int(self._parent[v])

        self.order.append(v)
        self.parents[v] = u
        self.cumulative[v] = self.cumulative[u] + w
        self.cumulative_costs.append(self.cumulative_costs[-1] + self.cumulative[v])
        self.edge_sums.append(self.edge_sums[-1] + w)

        self._available[v] = False
        self._key[v] = np.inf
        row = self.graph.weights[v]
        better = self._available & (row < self._key)
        tie = self._available & (row == self._key) & (v < self._parent)
        update = better | tie
        self._key[update] = row[update]
        self._parent[update] = v
        return True

    def grow_to(self, i: int) -> None:
        while self.attached < i:
            if not self.extend():
                raise InsufficientVertices(f"only {self.attached} vertices reachable, asked for {i}")

    def cost(self, i: int, mode: CostMode = "cumulative") -> float:
        self.grow_to(i)
        return self.cumulative_costs[i] if mode == "cumulative" else self.edge_sums[i]

    def next_cost(self, i: int, mode: CostMode = "cumulative") -> float:
        """Cost of Y(i + 1), or inf when no vertex is left to attach."""
        if i + 1 > self.capacity:
            return math.inf
        try:
            return self.cost(i + 1, mode)
        except InsufficientVertices:
            return math.inf

    def tree(self, i: int) -> Trajectory:
        self.grow_to(i)
        order = tuple(self.order[: i + 1])
        return Trajectory(
            uav_id=self.graph.uav_id,
            parents={v: self.parents[v] for v in order[1:]},
            cumulative={v: self.cumulative[v] for v in order},
            order=order,
        )

    def affordable_prefix(self, limit: float, *, max_vertices: int | None = None, mode: CostMode = "cumulative") -> int:
        """Largest i <= j with cost(Y(i)) <= limit (0 when none qualifies)."""
        j = self.capacity if max_vertices is None else min(max_vertices, self.capacity)
        costs = self.cumulative_costs if mode == "cumulative" else self.edge_sums
        # Prefix costs are nondecreasing in i (nonnegative weights): once Y(i)
        # exceeds the limit no later Y(i') qualifies, so growth can stop there.
        while self.attached < j and costs[-1] <= limit:
            if not self.extend():
                break
        hi = min(j, self.attached) + 1
        return bisect_right(costs, limit, 0, hi) - 1


def prim_tree(g: EnergyGraph, root: int, i: int, *, allowed: np.ndarray | None = None) -> Trajectory:
    if i < 0 or i > g.size - 1:
        raise InsufficientVertices(f"asked for {i} vertices on a graph of {g.size - 1}")
    return PrimGrowth(g, allowed, root=root).tree(i)


def budgeted_jmst(
    g: EnergyGraph,
    budget: float,
    cfg: JmstConfig = JmstConfig(),
    *,
    allowed: np.ndarray | None = None,
    growth: PrimGrowth | None = None,
) -> Trajectory:
    """
    Largest Prim tree Y(i), i <= j, with C(Y(i)) <= lambda * budget.

    ``growth`` lets callers reuse a Prim run already computed on the same
    vertex set; it must have been built on ``g`` with the same ``allowed`` mask.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    growth = growth if growth is not None else PrimGrowth(g, allowed)
    limit = cfg.lam * budget
    i = growth.affordable_prefix(limit, max_vertices=cfg.max_vertices, mode=cfg.cost_mode)
    return growth.tree(i)
