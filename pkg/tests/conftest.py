from __future__ import annotations

from dataclasses import replace
from typing import Sequence

import numpy as np
import pytest

from swarmplan.core.inspection_graph import Scenario
from swarmplan.models.energy_model import Environment, UavSpec
from swarmplan.models.parameters import default_environment, default_radio, reference_uav
from swarmplan.models.radio_model import Point, RadioConfig


def make_scenario(coords: Sequence[tuple[float, float]], *, area=(200.0, 200.0), seed: int = 0) -> Scenario:
    """BS at the origin followed by ``coords`` as points 1..N."""
    points = [Point(0.0, 0.0, 0)]
    points.extend(Point(float(x), float(y), i + 1) for i, (x, y) in enumerate(coords))
    return Scenario(points=tuple(points), area=area, seed=seed)


def random_scenario(rng: np.random.Generator, n: int, area=(200.0, 200.0)) -> Scenario:
    xy = rng.uniform(0.0, area[0], size=(n, 2))
    return make_scenario([tuple(p) for p in xy], area=area)


def fleet_of(k: int, uav: UavSpec, budgets: Sequence[float] | None = None) -> list[UavSpec]:
    if budgets is None:
        return [uav] * k
    return [replace(uav, energy_budget=float(b)) for b in budgets]


@pytest.fixture
def uav() -> UavSpec:
    return reference_uav()


@pytest.fixture
def env() -> Environment:
    return default_environment()


@pytest.fixture
def radio() -> RadioConfig:
    return default_radio()


@pytest.fixture
def collinear() -> Scenario:
    # a=(10, 0) and b=(20, 0) on a line through the BS
    return make_scenario([(10.0, 0.0), (20.0, 0.0)])


@pytest.fixture
def single_point() -> Scenario:
    return make_scenario([(100.0, 0.0)])
