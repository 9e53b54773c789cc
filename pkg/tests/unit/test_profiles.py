#! /usr/bin/env python
"""Test suite for the interaction-force profiles"""
# pylint: disable=missing-function-docstring
import numpy as np
import pytest
from scipy import stats

from tests.unit.oracles import natural_spline
from tilthex import ConfigError
from tilthex.harness.profiles import (
    PUSH_FORCES,
    PUSH_TIMES,
    ForceProfile,
    profile_eval,
    sample_waypoints,
)


def test_waypoints_are_reproduced_exactly():
    profile = ForceProfile.push_sequence()

    for t, force in zip(PUSH_TIMES, PUSH_FORCES):
        assert profile(t).tolist() == list(force)


@pytest.mark.parametrize("t", [21.5, 29.0, 45.0, 71.25])
def test_spline_matches_a_natural_spline(t):
    profile = ForceProfile.push_sequence()
    times = np.array(PUSH_TIMES)
    forces = np.array(PUSH_FORCES)

    expected = [natural_spline(times, forces[:, axis], t) for axis in range(3)]

    assert profile_eval(profile, t) == pytest.approx(expected, abs=1e-9)


def test_end_values_are_held():
    profile = ForceProfile.push_sequence()

    assert profile(-5.0).tolist() == [0.0, 0.0, 0.0]
    assert profile(80.5).tolist() == [-6.0, -8.0, 0.0]


def test_zero_profile():
    assert ForceProfile.zero(10.0)(3.0).tolist() == [0.0, 0.0, 0.0]


@pytest.mark.parametrize(
    "times, forces",
    [
        ([0.0], [[0.0, 0.0, 0.0]]),
        ([0.0, 1.0], [[0.0, 0.0, 0.0]]),
        ([0.0, 1.0], [[0.0, 0.0], [0.0, 0.0]]),
        ([0.0, 0.0], [[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]]),
    ],
)
def test_invalid_profiles(times, forces):
    with pytest.raises(ConfigError):
        ForceProfile(np.array(times), np.array(forces))


def test_from_dict():
    profile = ForceProfile.from_dict(ForceProfile.push_sequence().to_dict())

    assert profile(60.0).tolist() == [-10.0, 7.0, 2.0]
    with pytest.raises(ConfigError, match="missing"):
        ForceProfile.from_dict({"times": [0.0, 1.0]})
    with pytest.raises(ConfigError, match="Unknown profile keys"):
        ForceProfile.from_dict({"times": [0.0, 1.0], "forces": [], "shape": 1})


def test_sampled_waypoints_stay_at_rest_while_settling(rng):
    profile = sample_waypoints(rng)

    assert profile.times.tolist() == list(PUSH_TIMES)
    assert np.all(profile.forces[:2] == 0.0)
    assert np.all(np.abs(profile.forces[2:, :2]) <= 15.0)
    assert np.all((profile.forces[2:, 2] >= 0.0) & (profile.forces[2:, 2] <= 15.0))


def test_sampled_waypoints_are_uniform(rng):
    forces = np.array([sample_waypoints(rng).forces[2:] for _ in range(400)])

    lateral = forces[:, :, :2].ravel()
    vertical = forces[:, :, 2].ravel()

    assert stats.kstest(lateral, "uniform", args=(-15.0, 30.0)).pvalue > 1e-3
    assert stats.kstest(vertical, "uniform", args=(0.0, 15.0)).pvalue > 1e-3


def test_sampling_is_reproducible():
    first = sample_waypoints(np.random.Generator(np.random.Philox(7)))
    second = sample_waypoints(np.random.Generator(np.random.Philox(7)))

    assert np.array_equal(first.forces, second.forces)
