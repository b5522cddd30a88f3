"""
Per-UAV energy graph over the inspection points and the tree cost it induces.

Vertex 0 is the base station (root). The weight of the ordered pair (u, v) is the
energy UAV k spends flying u -> v and then hovering/transmitting at v. Weights are
stored for ordered pairs because the transmit term depends on the destination;
inside a trajectory every edge is read directed away from the root.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
import logging
import math
from typing import Iterable, Mapping
import warnings

import numpy as np

from swarmplan.errors import DegenerateDistance
from swarmplan.models.energy_model import Environment, UavSpec, flight_energy, power_profile
from swarmplan.models.radio_model import Point, RadioConfig, dwell_energy, inside_floor

logger = logging.getLogger(__name__)

ROOT = 0


@dataclass(frozen=True)
class Scenario:
    points: tuple[Point, ...]
    area: tuple[float, float]
    seed: int = 0
    # Optional per-point shadowing samples (dB), index-aligned with points.
    shadow_db: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "area", tuple(self.area))
        if not self.points:
            raise ValueError("scenario needs at least the BS point")
        for idx, p in enumerate(self.points):
            if p.id != idx:
                raise ValueError(f"point ids must equal their index (got id {p.id} at {idx})")
        w, h = self.area
        if not (w > 0 and h > 0):
            raise ValueError("area must be positive")
        for p in self.points:
            if not (0 <= p.x1 <= w and 0 <= p.x2 <= h):
                raise ValueError(f"point {p.id} lies outside the {w}x{h} area")
        if self.shadow_db is not None:
            object.__setattr__(self, "shadow_db", tuple(float(x) for x in self.shadow_db))
            if len(self.shadow_db) != len(self.points):
                raise ValueError("shadow_db must have one entry per point")

    @property
    def bs(self) -> Point:
        return self.points[ROOT]

    @property
    def n_points(self) -> int:
        """Number of inspection points (BS excluded)."""
        return len(self.points) - 1

    @property
    def inspection_ids(self) -> tuple[int, ...]:
        return tuple(range(1, len(self.points)))

    def shadow(self, point_id: int) -> float | None:
        if self.shadow_db is None:
            return None
        return self.shadow_db[point_id]

    def coordinates(self) -> np.ndarray:
        return np.array([[p.x1, p.x2] for p in self.points], dtype=float)


@dataclass(frozen=True)
class EnergyGraph:
    uav_id: int
    weights: np.ndarray  # weights[u, v]: energy of inspecting v right after u
    distances: np.ndarray
    dwell: np.ndarray  # route-independent hover+tx energy per destination (0 at the BS)
    flight_per_meter: float

    @property
    def size(self) -> int:
        return int(self.weights.shape[0])

    @property
    def vertices(self) -> range:
        return range(self.size)

    def weight(self, u: int, v: int) -> float:
        return float(self.weights[u, v])


@dataclass(frozen=True)
class Trajectory:
    uav_id: int
    parents: Mapping[int, int] = field(default_factory=dict)  # child -> parent; root absent
    cumulative: Mapping[int, float] = field(default_factory=lambda: {ROOT: 0.0})
    order: tuple[int, ...] = (ROOT,)  # attachment order, root first

    @classmethod
    def root_only(cls, uav_id: int) -> "Trajectory":
        return cls(uav_id=uav_id)

    @classmethod
    def from_parents(cls, uav_id: int, parents: Mapping[int, int], graph: EnergyGraph) -> "Trajectory":
        order = root_first_order(parents)
        cumulative: dict[int, float] = {ROOT: 0.0}
        for v in order[1:]:
            u = parents[v]
            cumulative[v] = cumulative[u] + graph.weight(u, v)
        return cls(uav_id=uav_id, parents=dict(parents), cumulative=cumulative, order=order)

    @classmethod
    def chain(cls, uav_id: int, route: Iterable[int], graph: EnergyGraph) -> "Trajectory":
        """Chain tree root -> route[0] -> route[1] -> ..."""
        parents: dict[int, int] = {}
        prev = ROOT
        for v in route:
            parents[v] = prev
            prev = v
        return cls.from_parents(uav_id, parents, graph)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.parents) | {ROOT}

    @property
    def inspected(self) -> frozenset[int]:
        return frozenset(self.parents)

    def children(self, v: int) -> list[int]:
        return sorted(c for c, p in self.parents.items() if p == v)

    def __len__(self) -> int:
        return len(self.parents) + 1


def root_first_order(parents: Mapping[int, int]) -> tuple[int, ...]:
    """Breadth-first order from the root; raises if ``parents`` is not a rooted tree."""
    if ROOT in parents:
        raise ValueError("the root cannot have a parent")
    kids: dict[int, list[int]] = {}
    for c, p in parents.items():
        kids.setdefault(p, []).append(c)
    order = [ROOT]
    queue = deque([ROOT])
    while queue:
        u = queue.popleft()
        for c in sorted(kids.get(u, [])):
            order.append(c)
            queue.append(c)
    if len(order) != len(parents) + 1:
        raise ValueError("parent map is not a tree rooted at the BS (cycle or dangling parent)")
    return tuple(order)


def visit_increment(
    uav: UavSpec,
    env: Environment,
    cfg: RadioConfig,
    src: Point,
    dst: Point,
    shadow_sample: float | None = None,
) -> float:
    """Energy to fly ``src`` -> ``dst`` and then record and upload at ``dst``."""
    if src.id == dst.id:
        raise ValueError("src and dst must differ")
    return flight_energy(uav, env, src.distance_to(dst)) + dwell_energy(uav, env, dst, cfg, shadow_sample)


@lru_cache(maxsize=64)
def _warn_clamped(sc: Scenario, cfg: RadioConfig) -> None:
    # Cached per (scenario, radio): K graphs over one scenario warn once.
    ids = inside_floor(sc.points, cfg)
    if ids:
        message = f"point(s) {ids} lie within the {cfg.distance_floor:g} m distance floor of the BS; path loss clamped"
        logger.warning("%s", message)
        warnings.warn(message, DegenerateDistance, stacklevel=3)


def build_graph(
    sc: Scenario, uav: UavSpec, env: Environment, cfg: RadioConfig, *, uav_id: int = 0
) -> EnergyGraph:
    if sc.n_points < 1:
        raise ValueError("build_graph needs at least one inspection point")
    bs = cfg.bs_location
    if not (math.isclose(sc.bs.x1, bs[0], abs_tol=1e-9) and math.isclose(sc.bs.x2, bs[1], abs_tol=1e-9)):
        raise ValueError(f"scenario BS {sc.bs.x1, sc.bs.x2} does not match radio bs_location {bs}")

    _warn_clamped(sc, cfg)

    xy = sc.coordinates()
    distances = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
    per_meter = power_profile(uav, env).flight_energy_per_meter

    dwell = np.zeros(len(sc.points))
    for p in sc.points[1:]:
        dwell[p.id] = dwell_energy(uav, env, p, cfg, sc.shadow(p.id))

    weights = per_meter * distances + dwell[None, :]
    np.fill_diagonal(weights, 0.0)
    for arr in (weights, distances, dwell):
        arr.setflags(write=False)

    logger.debug("built graph for uav %d over %d vertices", uav_id, len(sc.points))
    return EnergyGraph(uav_id=uav_id, weights=weights, distances=distances, dwell=dwell, flight_per_meter=per_meter)


def tree_cost(t: Trajectory) -> float:
    """Sum of root-to-vertex cumulative energies; the root contributes 0."""
    return float(sum(t.cumulative.values()))


def edge_weight_sum(t: Trajectory, graph: EnergyGraph) -> float:
    return float(sum(graph.weight(p, c) for c, p in t.parents.items()))


def subtree_sizes(t: Trajectory) -> dict[int, int]:
    sizes = {v: 1 for v in t.order}
    for v in reversed(t.order[1:]):
        sizes[t.parents[v]] += sizes[v]
    return sizes


def tree_cost_by_edges(t: Trajectory, graph: EnergyGraph) -> float:
    """Equivalent cost form: each edge weighted by the number of vertices below it."""
    sizes = subtree_sizes(t)
    return float(sum(graph.weight(p, c) * sizes[c] for c, p in t.parents.items()))
