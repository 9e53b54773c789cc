#! /usr/bin/env python
"""Test suite for the motion-capture and force-sensor models"""
# pylint: disable=missing-function-docstring
import numpy as np
import pytest

from tilthex import ConfigError, ContractViolation
from tilthex.geometry import E3
from tilthex.harness.sensors import (
    DEG2_TO_RAD2,
    MocapSensor,
    SensorModels,
    force_measure,
    mocap_noise,
)
from tilthex.methods.platform_model import RigidBodyState


def test_force_reading_carries_the_bias(rng):
    models = SensorModels(sigma_f=np.zeros(3))

    reading = force_measure(np.array([1.0, -2.0, 3.0]), models, rng)

    assert reading == pytest.approx([1.1, -1.9, 3.1])


def test_force_noise_statistics(rng):
    models = SensorModels.mocap_rig()
    true_force = np.array([2.0, 0.0, -1.0])

    readings = np.array([force_measure(true_force, models, rng) for _ in range(20000)])

    standard_error = np.sqrt(2.5e-3 / len(readings))
    assert np.abs(readings.mean(axis=0) - (true_force + 0.1)).max() < 5 * standard_error
    assert readings.var(axis=0) == pytest.approx(np.full(3, 2.5e-3), rel=0.05)


def test_noise_free_force_sensor_is_exact(rng):
    reading = force_measure(np.array([1.0, 2.0, 3.0]), SensorModels.noise_free(), rng)

    assert reading.tolist() == [1.0, 2.0, 3.0]


def test_position_noise_statistics(rng):
    models = SensorModels(sigma_p=np.array([1e-4, 4e-4, 9e-4]))

    samples = np.array(
        [mocap_noise(RigidBodyState(), models, rng).p for _ in range(20000)]
    )

    assert samples.var(axis=0) == pytest.approx([1e-4, 4e-4, 9e-4], rel=0.05)


def test_attitude_noise_stays_on_so3(rng):
    models = SensorModels(sigma_R=DEG2_TO_RAD2 * np.full(3, 4.0))

    noisy = mocap_noise(RigidBodyState(), models, rng)

    assert noisy.R @ noisy.R.T == pytest.approx(np.eye(3), abs=1e-12)
    # a few standard deviations of two degrees at most
    assert np.degrees(np.arccos(noisy.R[:, 2] @ E3)) < 15.0


def test_measurement_is_delayed(rng):
    sensor = MocapSensor(SensorModels.noise_free(0.012), 1e-3, rng)
    sensor.reset(RigidBodyState())
    for k in range(1, 31):
        sensor.record(RigidBodyState(p=np.array([k * 1e-3, 0.0, 0.0])))

    measured = sensor.mocap_measure(0.03)

    assert sensor.delay_steps == 12
    assert measured.p[0] == pytest.approx(0.018)


def test_measurement_is_held_between_samples(rng):
    sensor = MocapSensor(SensorModels.noise_free(), 1e-3, rng)
    sensor.reset(RigidBodyState())

    first = sensor.mocap_measure(0.0)
    for k in range(1, 6):
        sensor.record(RigidBodyState(p=np.array([k * 1e-3, 0.0, 0.0])))
    held = sensor.mocap_measure(0.005)
    for k in range(6, 11):
        sensor.record(RigidBodyState(p=np.array([k * 1e-3, 0.0, 0.0])))
    fresh = sensor.mocap_measure(0.01)

    assert first.p[0] == held.p[0] == 0.0
    assert fresh.p[0] == pytest.approx(0.01)


def test_first_record_fills_the_history(rng):
    sensor = MocapSensor(SensorModels.noise_free(0.005), 1e-3, rng)

    sensor.record(RigidBodyState(p=np.array([1.0, 2.0, 3.0])))

    assert sensor.mocap_measure(0.0).p.tolist() == [1.0, 2.0, 3.0]


def test_measuring_before_any_record_is_rejected(rng):
    sensor = MocapSensor(SensorModels.noise_free(), 1e-3, rng)

    with pytest.raises(ContractViolation):
        sensor.mocap_measure(0.0)


def test_from_dict_converts_degrees():
    models = SensorModels.from_dict({"sigma_omega": 2.0, "mocap_delay": 0.02})

    assert models.sigma_omega == pytest.approx(np.full(3, 2.0 * DEG2_TO_RAD2))
    assert models.mocap_delay == 0.02
    assert models.sigma_p == pytest.approx(SensorModels().sigma_p)


def test_from_dict_can_start_from_exact_sensors():
    models = SensorModels.from_dict({"noise_free": True, "m_f": [0.0, 0.0, 0.3]})

    assert models.sigma_p.tolist() == [0.0, 0.0, 0.0]
    assert models.m_f.tolist() == [0.0, 0.0, 0.3]


@pytest.mark.parametrize(
    "data",
    [
        {"sigma_x": 1.0},
        {"sigma_p": [-1.0, 0.0, 0.0]},
        {"mocap_delay": -0.01},
        {"force_rate": 0.0},
    ],
)
def test_invalid_sensor_models(data):
    with pytest.raises(ConfigError):
        SensorModels.from_dict(data)
