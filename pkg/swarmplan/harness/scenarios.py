from __future__ import annotations

from dataclasses import replace
from typing import Sequence

import numpy as np

from swarmplan.core.inspection_graph import Scenario
from swarmplan.models.energy_model import UavSpec
from swarmplan.models.radio_model import Point, RadioConfig, sample_shadowing


def cell_seed(base_seed: int, n: int, k: int, run: int) -> int:
    """Seed of one (N, K, run) cell; independent of the order cells execute in."""
    return int(np.random.SeedSequence([base_seed, n, k, run]).generate_state(1)[0])


def generate_scenario(
    n: int,
    area: tuple[float, float],
    seed: int,
    *,
    radio: RadioConfig | None = None,
) -> Scenario:
    """``n`` points uniform over the area with the BS as point 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = np.random.default_rng(seed)
    w, h = area
    xy = rng.uniform(low=(0.0, 0.0), high=(w, h), size=(n, 2))
    bs = radio.bs_location if radio is not None else (0.0, 0.0)
    points = [Point(float(bs[0]), float(bs[1]), 0)]
    points.extend(Point(float(x), float(y), i + 1) for i, (x, y) in enumerate(xy))

    shadow = None
    if radio is not None and radio.shadowing_sigma_db > 0:
        shadow = sample_shadowing(n, radio, rng)
    return Scenario(points=tuple(points), area=(float(w), float(h)), seed=int(seed), shadow_db=shadow)


def make_fleet(
    k: int,
    template: UavSpec,
    *,
    seed: int,
    heterogeneous: bool = True,
    eta_range: tuple[float, float] = (0.5, 0.9),
    budgets: Sequence[float] | None = None,
) -> list[UavSpec]:
    """``k`` copies of ``template``; heterogeneous fleets draw eta uniformly per UAV."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if budgets is not None and len(budgets) != k:
        raise ValueError("one budget per UAV expected")
    rng = np.random.default_rng([seed, 1])
    etas = rng.uniform(eta_range[0], eta_range[1], size=k) if heterogeneous else [template.power_efficiency] * k
    fleet = []
    for i in range(k):
        budget = template.energy_budget if budgets is None else budgets[i]
        fleet.append(replace(template, power_efficiency=float(etas[i]), energy_budget=float(budget)))
    return fleet
