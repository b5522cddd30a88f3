from __future__ import annotations

from dataclasses import replace
import math

import numpy as np
import pytest

from swarmplan.models.energy_model import hover_power_min
from swarmplan.models.radio_model import (
    Point,
    RadioConfig,
    airtime,
    dwell_energy,
    inside_floor,
    min_tx_power,
    min_tx_power_for_loss,
    path_loss,
    sample_shadowing,
    transmission_energy,
    uplink_rate,
)


def test_path_loss_at_one_metre_is_reference(radio):
    assert path_loss(Point(1.0, 0.0, 1), radio) == radio.reference_loss_db


def test_path_loss_area_corner(radio):
    assert path_loss(Point(100.0, 100.0, 1), radio) == pytest.approx(83.01, abs=0.005)


def test_path_loss_decade_adds_slope(radio):
    near = path_loss(Point(12.0, 0.0, 1), radio)
    far = path_loss(Point(120.0, 0.0, 2), radio)
    assert far - near == pytest.approx(radio.pathloss_slope)


def test_path_loss_uses_shadow_sample(radio):
    p = Point(50.0, 0.0, 1)
    assert path_loss(p, radio, 3.0) == pytest.approx(path_loss(p, radio) + 3.0)
    fixed = replace(radio, shadowing_db=-2.0)
    assert path_loss(p, fixed) == pytest.approx(path_loss(p, radio) - 2.0)


def test_points_inside_the_floor_are_clamped(radio):
    near = Point(0.25, 0.0, 1)
    assert path_loss(near, radio) == radio.reference_loss_db
    assert inside_floor([radio.bs_point, near, Point(3.0, 4.0, 2)], radio) == [1]


def test_rate_is_zero_without_power(radio):
    assert uplink_rate(0.0, 80.0, radio) == 0.0
    with pytest.raises(ValueError):
        uplink_rate(-1.0, 80.0, radio)


def test_min_power_meets_the_rate_exactly():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        cfg = RadioConfig(
            bandwidth=float(rng.uniform(1e5, 2e7)),
            rate_requirement=float(rng.uniform(1e4, 5e7)),
            noise_density=float(rng.uniform(1e-20, 1e-16)),
        )
        loss = float(rng.uniform(20.0, 140.0))
        p_t = min_tx_power_for_loss(loss, cfg)
        assert uplink_rate(p_t, loss, cfg) == pytest.approx(cfg.rate_requirement, rel=1e-9)


def test_three_db_halves_the_snr(radio):
    def snr(loss: float) -> float:
        return 2 ** (uplink_rate(0.01, loss, radio) / radio.bandwidth) - 1

    assert snr(80.0 + 10 * math.log10(2)) == pytest.approx(snr(80.0) / 2, rel=1e-9)


def test_min_tx_power_reference_values(radio):
    assert min_tx_power(Point(100.0, 100.0, 1), radio) == pytest.approx(0.0248, rel=1e-3)
    assert min_tx_power_for_loss(0.0, radio) == pytest.approx(1.2406e-10, rel=1e-4)


def test_min_tx_power_vanishes_with_the_rate(radio):
    tiny = replace(radio, rate_requirement=1e-9)
    assert min_tx_power_for_loss(80.0, tiny) < 1e-18


def test_airtime(radio):
    assert airtime(radio) == 4.0


def test_transmission_energy(uav, radio):
    p = Point(100.0, 100.0, 1)
    e = transmission_energy(uav, p, radio)
    assert e == pytest.approx(0.1418, rel=2e-3)
    assert transmission_energy(uav, p, replace(radio, packet_size=2 * radio.packet_size)) == pytest.approx(2 * e)


def test_dwell_energy(uav, env, radio):
    p = Point(100.0, 0.0, 1)
    expected = airtime(radio) * (min_tx_power(p, radio) + hover_power_min(uav, env)) / uav.power_efficiency
    assert dwell_energy(uav, env, p, radio) == pytest.approx(expected)
    assert dwell_energy(uav, env, p, radio) == pytest.approx(1333.1, rel=5e-4)


def test_sample_shadowing_without_sigma_is_fixed(radio):
    rng = np.random.default_rng(0)
    assert sample_shadowing(3, radio, rng) == (0.0, 0.0, 0.0, 0.0)
    assert sample_shadowing(2, replace(radio, shadowing_db=1.5), rng) == (0.0, 1.5, 1.5)


def test_sample_shadowing_gaussian(radio):
    cfg = replace(radio, shadowing_sigma_db=4.0)
    samples = sample_shadowing(5000, cfg, np.random.default_rng(9))
    assert len(samples) == 5001
    assert samples[0] == 0.0
    draws = np.asarray(samples[1:])
    assert abs(draws.mean()) < 0.25
    assert draws.std() == pytest.approx(4.0, rel=0.05)


@pytest.mark.parametrize(
    "field,value",
    [("bandwidth", 0.0), ("noise_density", -1.0), ("rate_requirement", 0.0), ("packet_size", -1.0)],
)
def test_radio_config_validation(radio, field, value):
    with pytest.raises(ValueError):
        replace(radio, **{field: value})


def test_points_need_finite_coordinates():
    with pytest.raises(ValueError):
        Point(math.nan, 0.0, 1)


def test_min_tx_power_never_drops_with_distance(radio):
    rng = np.random.default_rng(12)
    for _ in range(1000):
        r1, r2 = np.sort(rng.uniform(0.0, 300.0, size=2))
        angle = float(rng.uniform(0.0, 2 * math.pi))
        near = Point(float(r1 * math.cos(angle)), float(r1 * math.sin(angle)), 1)
        far = Point(float(r2 * math.cos(angle)), float(r2 * math.sin(angle)), 2)
        assert min_tx_power(near, radio) <= min_tx_power(far, radio)
