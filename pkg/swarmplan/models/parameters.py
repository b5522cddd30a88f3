from __future__ import annotations

import math

from swarmplan.models.energy_model import Environment, UavSpec
from swarmplan.models.radio_model import RadioConfig

UNLIMITED_BUDGET = math.inf

DEFAULT_AREA = (200.0, 200.0)


def reference_uav(*, power_efficiency: float = 0.7, energy_budget: float = UNLIMITED_BUDGET) -> UavSpec:
    return UavSpec(
        body_mass=1.07,
        battery_mass=1.00,
        rotor_count=4,
        rotor_diameter=0.254,
        power_efficiency=power_efficiency,
        ground_speed=1.49,
        drag_force=9.6998,
        energy_budget=energy_budget,
    )


def default_environment() -> Environment:
    return Environment(air_density=1.225, gravity=9.81, pitch_angle=None)


def default_radio() -> RadioConfig:
    return RadioConfig(
        reference_loss_db=40.0,
        pathloss_slope=20.0,
        shadowing_db=0.0,
        shadowing_sigma_db=0.0,
        bandwidth=1e6,
        noise_density=4.002e-18,
        rate_requirement=5e6,
        packet_size=20e6,
        bs_location=(0.0, 0.0),
    )
