"""
Propulsion power of a multirotor UAV: thrust, induced velocity, forward-flight
and hover power, and the flying energy over a straight leg.

All quantities are SI. Efficiency ``eta`` scales the aerodynamic minimum power
up to the electrical power actually drawn from the battery.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import logging
import math

from swarmplan.errors import NonConvergence

logger = logging.getLogger(__name__)

STANDARD_GRAVITY = 9.81

BISECTION_RTOL = 1e-12
BISECTION_MAX_ITERATIONS = 200
BRACKET_FACTOR = 10.0


@dataclass(frozen=True)
class UavSpec:
    body_mass: float
    battery_mass: float
    rotor_count: int
    rotor_diameter: float
    power_efficiency: float
    ground_speed: float
    drag_force: float
    energy_budget: float = math.inf  # inf means "no energy constraint"

    def __post_init__(self) -> None:
        if not self.body_mass > 0 or not self.battery_mass > 0:
            raise ValueError("body_mass and battery_mass must be > 0")
        if int(self.rotor_count) != self.rotor_count or self.rotor_count < 1:
            raise ValueError("rotor_count must be an integer >= 1")
        if not self.rotor_diameter > 0:
            raise ValueError("rotor_diameter must be > 0")
        if not 0 < self.power_efficiency <= 1:
            raise ValueError("power_efficiency must be in (0, 1]")
        if not self.ground_speed > 0:
            raise ValueError("ground_speed must be > 0")
        if not self.drag_force >= 0:
            raise ValueError("drag_force must be >= 0")
        if math.isnan(self.energy_budget) or self.energy_budget < 0:
            raise ValueError("energy_budget must be >= 0 (or math.inf)")

    @property
    def mass(self) -> float:
        return self.body_mass + self.battery_mass

    @property
    def rotor_area_factor(self) -> float:
        """q * r^2 * pi, with r used exactly as the model prints it."""
        return self.rotor_count * self.rotor_diameter**2 * math.pi


@dataclass(frozen=True)
class Environment:
    air_density: float = 1.225
    gravity: float = STANDARD_GRAVITY
    # None: derive per UAV as atan(f_d / (m g)), which tilts thrust to balance drag.
    pitch_angle: float | None = None

    def __post_init__(self) -> None:
        if not self.air_density > 0:
            raise ValueError("air_density must be > 0")
        if not self.gravity > 0:
            raise ValueError("gravity must be > 0")
        if self.pitch_angle is not None and not 0 <= self.pitch_angle < math.pi / 2:
            raise ValueError("pitch_angle must be in [0, pi/2)")


@dataclass(frozen=True)
class PowerProfile:
    thrust: float
    pitch: float
    induced_velocity: float
    hover_induced_velocity: float
    flight_power_min: float
    flight_power: float
    hover_power_min: float
    hover_power: float
    speed: float

    @property
    def flight_energy_per_meter(self) -> float:
        # p_f^min / (v * eta) == p_f / v
        return self.flight_power / self.speed


def pitch_angle(uav: UavSpec, env: Environment) -> float:
    if env.pitch_angle is not None:
        return env.pitch_angle
    return math.atan(uav.drag_force / (uav.mass * env.gravity))


def thrust(uav: UavSpec, env: Environment) -> float:
    return uav.mass * env.gravity + uav.drag_force


def hover_induced_velocity(thrust_n: float, uav: UavSpec, env: Environment) -> float:
    return math.sqrt(2.0 * thrust_n / (uav.rotor_area_factor * env.air_density))


def induced_velocity_residual(
    v_hat: float, thrust_n: float, speed: float, uav: UavSpec, env: Environment
) -> float:
    """Relative residual of the induced-velocity balance at ``v_hat``."""
    beta = pitch_angle(uav, env)
    lhs = (
        v_hat
        * uav.rotor_area_factor
        * env.air_density
        * math.hypot(speed * math.cos(beta), speed * math.sin(beta) + v_hat)
    )
    return (lhs - 2.0 * thrust_n) / (2.0 * thrust_n)


def induced_velocity(
    thrust_n: float,
    speed: float,
    uav: UavSpec,
    env: Environment,
    *,
    rtol: float = BISECTION_RTOL,
    max_iterations: int = BISECTION_MAX_ITERATIONS,
) -> float:
    """
    Positive root of ``v_hat * q r^2 pi rho * |(v cos b, v sin b + v_hat)| = 2T``.

    The residual is strictly increasing in ``v_hat`` for ``b`` in [0, pi/2), so
    bisection over ``(0, 10 * v_hat_hover]`` always brackets the root.
    """
    if not thrust_n > 0:
        raise ValueError("thrust must be > 0")
    if speed < 0:
        raise ValueError("speed must be >= 0")

    v_hover = hover_induced_velocity(thrust_n, uav, env)
    if speed == 0:
        return v_hover

    lo, hi = 0.0, BRACKET_FACTOR * v_hover
    f_hi = induced_velocity_residual(hi, thrust_n, speed, uav, env)
    if f_hi <= 0:
        raise NonConvergence(f"root not bracketed at v_hat={hi}", iterations=0)

    for it in range(1, max_iterations + 1):
        mid = 0.5 * (lo + hi)
        f_mid = induced_velocity_residual(mid, thrust_n, speed, uav, env)
        if abs(f_mid) < rtol:
            return mid
        if mid in (lo, hi):
            # Bracket collapsed to adjacent floats.
            if abs(f_mid) < 1e-9:
                return mid
            break
        if f_mid < 0:
            lo = mid
        else:
            hi = mid

    raise NonConvergence(
        f"induced velocity did not converge (T={thrust_n}, v={speed})", iterations=max_iterations
    )


def flight_power_min(uav: UavSpec, env: Environment) -> float:
    t = thrust(uav, env)
    v_hat = induced_velocity(t, uav.ground_speed, uav, env)
    return (v_hat + uav.ground_speed * math.sin(pitch_angle(uav, env))) * t


def flight_power(uav: UavSpec, env: Environment) -> float:
    return flight_power_min(uav, env) / uav.power_efficiency


def flight_energy(uav: UavSpec, env: Environment, distance: float) -> float:
    if distance < 0:
        raise ValueError("distance must be >= 0")
    return power_profile(uav, env).flight_power_min * distance / (uav.ground_speed * uav.power_efficiency)


def hover_power_min_from_thrust(thrust_n: float, uav: UavSpec, env: Environment) -> float:
    if thrust_n <= 0:
        return 0.0
    return thrust_n * math.sqrt(thrust_n) / math.sqrt(0.5 * uav.rotor_area_factor * env.air_density)


def hover_power_min(uav: UavSpec, env: Environment) -> float:
    return hover_power_min_from_thrust(thrust(uav, env), uav, env)


def hover_power(uav: UavSpec, env: Environment) -> float:
    return hover_power_min(uav, env) / uav.power_efficiency


@lru_cache(maxsize=1024)
def power_profile(uav: UavSpec, env: Environment) -> PowerProfile:
    t = thrust(uav, env)
    beta = pitch_angle(uav, env)
    v_hat = induced_velocity(t, uav.ground_speed, uav, env)
    p_f_min = (v_hat + uav.ground_speed * math.sin(beta)) * t
    p_h_min = hover_power_min_from_thrust(t, uav, env)
    logger.debug("power profile: T=%.4f N beta=%.4f v_hat=%.4f p_f_min=%.3f W", t, beta, v_hat, p_f_min)
    return PowerProfile(
        thrust=t,
        pitch=beta,
        induced_velocity=v_hat,
        hover_induced_velocity=hover_induced_velocity(t, uav, env),
        flight_power_min=p_f_min,
        flight_power=p_f_min / uav.power_efficiency,
        hover_power_min=p_h_min,
        hover_power=p_h_min / uav.power_efficiency,
        speed=uav.ground_speed,
    )
