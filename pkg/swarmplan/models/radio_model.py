"""
Uplink from a hovering UAV to the base station: log-distance path loss, Shannon
rate, the minimum transmit power that meets the rate requirement, and the energy
spent sending one recorded packet.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Iterable

import numpy as np

from swarmplan.models.energy_model import Environment, UavSpec, power_profile


@dataclass(frozen=True)
class Point:
    x1: float
    x2: float
    id: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise ValueError(f"point {self.id} has non-finite coordinates")

    def distance_to(self, other: "Point") -> float:
        return math.hypot(self.x1 - other.x1, self.x2 - other.x2)


@dataclass(frozen=True)
class RadioConfig:
    reference_loss_db: float = 40.0
    pathloss_slope: float = 20.0
    shadowing_db: float = 0.0  # fixed xi used when no per-point sample exists
    shadowing_sigma_db: float = 0.0  # > 0: Gaussian xi drawn once per point per scenario
    bandwidth: float = 1e6
    noise_density: float = 4.002e-18
    rate_requirement: float = 5e6
    packet_size: float = 20e6
    bs_location: tuple[float, float] = (0.0, 0.0)
    distance_floor: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "bs_location", tuple(float(c) for c in self.bs_location))
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be > 0")
        if not self.noise_density > 0:
            raise ValueError("noise_density must be > 0")
        if not self.rate_requirement > 0:
            raise ValueError("rate_requirement must be > 0")
        if self.packet_size < 0:
            raise ValueError("packet_size must be >= 0")
        if self.pathloss_slope < 0:
            raise ValueError("pathloss_slope must be >= 0")
        if self.shadowing_sigma_db < 0:
            raise ValueError("shadowing_sigma_db must be >= 0")
        if not self.distance_floor > 0:
            raise ValueError("distance_floor must be > 0")

    @property
    def bs_point(self) -> Point:
        return Point(self.bs_location[0], self.bs_location[1], 0)


def distance_to_bs(p: Point, cfg: RadioConfig) -> float:
    return math.hypot(p.x1 - cfg.bs_location[0], p.x2 - cfg.bs_location[1])


def inside_floor(points: Iterable[Point], cfg: RadioConfig) -> list[int]:
    """Ids of non-BS points whose path loss gets clamped to the distance floor."""
    return [p.id for p in points if p.id != 0 and distance_to_bs(p, cfg) < cfg.distance_floor]


def path_loss(p: Point, cfg: RadioConfig, shadow_sample: float | None = None) -> float:
    """Log-distance loss in dB; distances under ``cfg.distance_floor`` are clamped to it."""
    d = max(distance_to_bs(p, cfg), cfg.distance_floor)
    xi = cfg.shadowing_db if shadow_sample is None else shadow_sample
    return cfg.reference_loss_db + cfg.pathloss_slope * math.log10(d) + xi


def uplink_rate(tx_power: float, loss_db: float, cfg: RadioConfig) -> float:
    if tx_power < 0:
        raise ValueError("tx_power must be >= 0")
    snr = tx_power * 10 ** (-loss_db / 10) / (cfg.bandwidth * cfg.noise_density)
    return cfg.bandwidth * math.log2(1 + snr)


def min_tx_power_for_loss(loss_db: float, cfg: RadioConfig) -> float:
    # expm1 keeps precision when R_th / w is tiny.
    spectral = math.expm1(cfg.rate_requirement / cfg.bandwidth * math.log(2))
    return cfg.bandwidth * cfg.noise_density * spectral * 10 ** (loss_db / 10)


def min_tx_power(p: Point, cfg: RadioConfig, shadow_sample: float | None = None) -> float:
    return min_tx_power_for_loss(path_loss(p, cfg, shadow_sample), cfg)


def airtime(cfg: RadioConfig) -> float:
    """Over-the-air latency tau = B / R_th of one packet."""
    return cfg.packet_size / cfg.rate_requirement


def transmission_energy(
    uav: UavSpec, p: Point, cfg: RadioConfig, shadow_sample: float | None = None
) -> float:
    return cfg.packet_size * min_tx_power(p, cfg, shadow_sample) / (cfg.rate_requirement * uav.power_efficiency)


def dwell_energy(
    uav: UavSpec, env: Environment, p: Point, cfg: RadioConfig, shadow_sample: float | None = None
) -> float:
    """Hover plus transmit energy spent at ``p``; independent of the route."""
    p_h_min = power_profile(uav, env).hover_power_min
    return airtime(cfg) * (min_tx_power(p, cfg, shadow_sample) + p_h_min) / uav.power_efficiency


def sample_shadowing(n_points: int, cfg: RadioConfig, rng: np.random.Generator) -> tuple[float, ...]:
    """One xi per point (index 0 is the BS and always 0 dB)."""
    if n_points < 0:
        raise ValueError("n_points must be >= 0")
    if cfg.shadowing_sigma_db == 0:
        return (0.0, *([cfg.shadowing_db] * n_points))
    draws = rng.normal(0.0, cfg.shadowing_sigma_db, size=n_points)
    return (0.0, *(float(x) for x in draws))
