from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from swarmplan.core.swarm_planner import PlannerConfig
from swarmplan.errors import ConfigError
from swarmplan.models.energy_model import Environment, UavSpec
from swarmplan.models.radio_model import RadioConfig

Budget = Union[float, Literal["unlimited"]]


def _budget_value(b: Budget) -> float:
    return math.inf if b == "unlimited" else float(b)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class UavTemplate(_Strict):
    body_mass: float = Field(1.07, gt=0)
    battery_mass: float = Field(1.00, gt=0)
    rotor_count: int = Field(4, ge=1)
    rotor_diameter: float = Field(0.254, gt=0)
    power_efficiency: float = Field(0.7, gt=0, le=1)
    ground_speed: float = Field(1.49, gt=0)
    drag_force: float = Field(9.6998, ge=0)
    energy_budget: Budget = "unlimited"

    def to_spec(self, **overrides: float) -> UavSpec:
        values = self.model_dump()
        values["energy_budget"] = _budget_value(self.energy_budget)
        values.update(overrides)
        return UavSpec(**values)


class EnvironmentModel(_Strict):
    air_density: float = Field(1.225, gt=0)
    gravity: float = Field(9.81, gt=0)
    pitch_angle: float | None = Field(None, ge=0, lt=math.pi / 2)

    def to_env(self) -> Environment:
        return Environment(**self.model_dump())


class RadioModel(_Strict):
    reference_loss_db: float = 40.0
    pathloss_slope: float = Field(20.0, ge=0)
    shadowing_db: float = 0.0
    shadowing_sigma_db: float = Field(0.0, ge=0)
    bandwidth: float = Field(1e6, gt=0)
    noise_density: float = Field(4.002e-18, gt=0)
    rate_requirement: float = Field(5e6, gt=0)
    packet_size: float = Field(20e6, ge=0)
    bs_location: tuple[float, float] = (0.0, 0.0)
    distance_floor: float = Field(1.0, gt=0)

    def to_radio(self) -> RadioConfig:
        return RadioConfig(**self.model_dump())


class PlannerModel(_Strict):
    lam: float = Field(2.0, ge=1, alias="lambda")
    delta_e: float | None = Field(None, gt=0)
    budget: Union[Budget, list[Budget]] = "unlimited"
    max_vertices: int | None = Field(None, ge=1)
    cost_mode: Literal["cumulative", "edge_sum"] = "cumulative"

    def budgets_for(self, k: int, template: UavTemplate) -> tuple[float, ...]:
        """Per-UAV E_th for a fleet of ``k``; a list supplies the first ``k`` entries."""
        if isinstance(self.budget, list):
            if len(self.budget) < k:
                raise ConfigError(f"budget list has {len(self.budget)} entries, fleet has {k}")
            return tuple(_budget_value(b) for b in self.budget[:k])
        if self.budget == "unlimited" and template.energy_budget != "unlimited":
            return (_budget_value(template.energy_budget),) * k
        return (_budget_value(self.budget),) * k

    def to_planner(self) -> PlannerConfig:
        return PlannerConfig(
            delta_e=self.delta_e, lam=self.lam, max_vertices=self.max_vertices, cost_mode=self.cost_mode
        )


class FleetModel(_Strict):
    template: UavTemplate = Field(default_factory=UavTemplate)
    heterogeneous: bool = True
    eta_range: tuple[float, float] = (0.5, 0.9)

    @field_validator("eta_range")
    @classmethod
    def _eta_range(cls, v: tuple[float, float]) -> tuple[float, float]:
        lo, hi = v
        if not 0 < lo <= hi <= 1:
            raise ValueError("eta_range must satisfy 0 < low <= high <= 1")
        return v


class RunConfig(_Strict):
    """Fleet and model parameters for single-scenario commands."""

    uavs: int = Field(4, ge=1)
    fleet: FleetModel = Field(default_factory=FleetModel)
    environment: EnvironmentModel = Field(default_factory=EnvironmentModel)
    radio: RadioModel = Field(default_factory=RadioModel)
    planner: PlannerModel = Field(default_factory=PlannerModel)


class ExperimentConfig(_Strict):
    area: tuple[float, float] = (200.0, 200.0)
    point_counts: list[int] = [100]
    fleet_sizes: list[int] = [2, 4, 6, 8, 10, 12]
    runs_per_cell: int = Field(50, ge=1)
    fleet: FleetModel = Field(default_factory=FleetModel)
    environment: EnvironmentModel = Field(default_factory=EnvironmentModel)
    radio: RadioModel = Field(default_factory=RadioModel)
    planner: PlannerModel = Field(default_factory=PlannerModel)
    base_seed: int = 0
    output_dir: str = "results"
    jobs: int = Field(1, ge=1)
    # target inspection times (s) per point count for the CDF summary
    cdf_targets: dict[int, float] = {100: 500.0, 200: 900.0}

    @model_validator(mode="after")
    def _check(self) -> "ExperimentConfig":
        if not self.point_counts or any(n < 0 for n in self.point_counts):
            raise ValueError("point_counts must be a non-empty list of counts >= 0")
        if not self.fleet_sizes or any(k < 1 for k in self.fleet_sizes):
            raise ValueError("fleet_sizes must be a non-empty list of sizes >= 1")
        if not (self.area[0] > 0 and self.area[1] > 0):
            raise ValueError("area must be positive")
        return self


def load_model(path: Path, model: type[_Strict]) -> _Strict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from e
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"invalid {model.__name__} in {path}:\n{e}") from e
