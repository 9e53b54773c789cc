#! /usr/bin/env python
"""Test suite for closed-loop flights of the full harness"""
# pylint: disable=missing-function-docstring
import numpy as np
import pandas as pd
import pytest

from tilthex.harness.kpi import compute_kpis
from tilthex.harness.monte_carlo import (
    MonteCarloConfig,
    closed_loop_comparison,
    compare_allocators,
    run_monte_carlo,
)
from tilthex.harness.scenario import ScenarioConfig
from tilthex.harness.sensors import SensorModels
from tilthex.harness.simulation import simulate, wall_task


@pytest.mark.integration
def test_noise_free_hover_settles(hover_scenario, flight_hexa):
    trace = simulate(hover_scenario, hexa=flight_hexa)

    settled = trace.window(20.0)
    errors = np.linalg.norm(settled.vectors("e_p"), axis=1)
    assert errors.max() <= 0.01
    assert trace.infeasible_count == 0
    assert not settled.frame["saturated"].any()


@pytest.mark.integration
def test_same_seed_gives_the_same_trace(flight_hexa):
    scenario = ScenarioConfig.push_sequence(duration=30.0, seed=7)

    first = simulate(scenario, hexa=flight_hexa).frame.drop(columns=["t_c"])
    second = simulate(scenario, hexa=flight_hexa).frame.drop(columns=["t_c"])

    pd.testing.assert_frame_equal(first, second)


@pytest.mark.integration
def test_force_profile_run_has_finite_indicators(flight_hexa):
    trace = simulate(ScenarioConfig.push_sequence(), hexa=flight_hexa)

    report = compute_kpis(trace, start=20.0, hexa=flight_hexa)

    assert report.finite
    assert 0.0 < report.FEI_mean <= 1.0
    assert 0.0 < report.MEI_mean <= 1.0


@pytest.mark.integration
def test_wall_task_touches_three_times(wall_scenario, wall_hexa):
    trace = wall_task(wall_scenario, hexa=wall_hexa)

    contact = trace.phase("contact")
    assert len(contact) > 0
    assert np.abs(contact.vectors("f_i")[:, 0]).mean() > 0.0
    assert trace.t[-1] < 67.0


@pytest.mark.integration
def test_parallel_campaign_matches_serial(flight_hexa):
    template = ScenarioConfig(sensors=SensorModels.noise_free())
    serial = MonteCarloConfig(runs=2, r_stars=(0.5, 5.0), master_seed=3)
    parallel = MonteCarloConfig(runs=2, r_stars=(0.5, 5.0), master_seed=3, workers=2)

    first = run_monte_carlo(template, serial, flight_hexa.lut)
    second = run_monte_carlo(template, parallel, flight_hexa.lut)

    pd.testing.assert_frame_equal(
        first.per_run.drop(columns=["t_c_mean"]),
        second.per_run.drop(columns=["t_c_mean"]),
    )
    assert first.failures == second.failures == 0


@pytest.mark.integration
def test_selection_plus_allocation_is_faster_than_the_baseline(flight_hexa):
    trace = simulate(ScenarioConfig.push_sequence(duration=30.0), hexa=flight_hexa)

    comparison = compare_allocators(trace, flight_hexa, steps=500)

    assert comparison.steps == 500
    assert comparison.ratio <= 0.2


@pytest.mark.integration
def test_closed_loop_comparison_flies_both_allocators(flight_hexa):
    scenario = ScenarioConfig.push_sequence(duration=22.0, seed=2)

    frame, replay = closed_loop_comparison(scenario, flight_hexa)

    assert frame["configuration"].tolist() == ["proposed", "baseline"]
    assert frame["N"].tolist() == [200, 200]
    assert replay.steps == 2200


@pytest.mark.integration
def test_small_margin_tracks_better_than_a_large_one(flight_hexa):
    config = MonteCarloConfig(runs=20, r_stars=(0.5, 5.0), master_seed=42, workers=4)

    result = run_monte_carlo(ScenarioConfig(), config, flight_hexa.lut)

    assert result.failures == 0
    errors = result.per_run.pivot(
        index="run", columns="configuration", values="e_p_rms"
    )
    small, large = errors["r_star=0.5"], errors["r_star=5"]
    assert small.mean() < large.mean()
    assert (small < large).mean() >= 0.8
