#! /usr/bin/env python
"""Test suite for the grid-search baseline and its box-constrained solver"""
# pylint: disable=missing-function-docstring
import logging
import time

import numpy as np
import pytest

from tests.unit.oracles import enumerate_box_lsq
from tilthex import AllocationFailure, ConfigError, Hexarotor, SolverFailure
from tilthex.methods.baseline_allocator import BaselineConfig, bounded_least_squares
from tilthex.methods.cant_selector import cost
from tilthex.methods.platform_model import BodyWrench


def test_solver_matches_exhaustive_active_sets(rng):
    for _ in range(25):
        A = rng.normal(size=(6, 6))  # pylint: disable=invalid-name
        b = rng.normal(scale=3.0, size=6)
        lb, ub = np.zeros(6), np.ones(6)

        x = bounded_least_squares(A, b, lb, ub)

        expected = enumerate_box_lsq(A, b, lb, ub)
        assert np.all(x >= lb) and np.all(x <= ub)
        assert x == pytest.approx(expected, abs=1e-6)


def test_solver_matches_exhaustive_active_sets_on_allocation_matrices(hexa, rng):
    u_max = hexa.params.u_max
    lb, ub = np.zeros(6), np.full(6, u_max)
    for degrees in (-35.0, 10.0, 45.0):
        C = hexa.build_matrices(np.deg2rad(degrees)).C  # pylint: disable=invalid-name
        b = C @ rng.uniform(-0.5 * u_max, 1.5 * u_max, 6)

        x = bounded_least_squares(C, b, lb, ub)

        expected = enumerate_box_lsq(C, b, lb, ub)
        found, best = np.sum((C @ x - b) ** 2), np.sum((C @ expected - b) ** 2)
        assert found == pytest.approx(best, rel=1e-6, abs=1e-12)


def test_solver_frees_a_wrongly_clipped_variable():
    A = np.array([[1.0, 1.0], [1.0, 1.01]])  # pylint: disable=invalid-name
    b = np.array([2.0, 2.05])

    x = bounded_least_squares(A, b, np.zeros(2), np.ones(2))

    assert x == pytest.approx([1.0, 1.0])


def test_solver_reports_the_iteration_cap():
    A = np.array([[1.0, 1.0], [1.0, 1.01]])  # pylint: disable=invalid-name
    b = np.array([2.0, 2.05])

    with pytest.raises(SolverFailure):
        bounded_least_squares(A, b, np.zeros(2), np.ones(2), max_iter=0)


def test_solver_logs_a_stall_short_of_convergence(mocker, caplog):
    A = np.array([[1.0], [1.0]])  # pylint: disable=invalid-name
    b = np.array([0.0, 1.0])
    mocker.patch(
        "tilthex.methods.baseline_allocator._kkt_violation", return_value=1.0
    )

    with caplog.at_level(logging.DEBUG, logger="tilthex.methods.baseline_allocator"):
        x = bounded_least_squares(A, b, np.zeros(1), np.ones(1))

    assert x == pytest.approx([0.5])
    assert "stalled" in caplog.text


def test_converged_solve_logs_nothing(caplog):
    A = np.array([[1.0, 1.0], [1.0, 1.01]])  # pylint: disable=invalid-name
    b = np.array([2.0, 2.05])

    with caplog.at_level(logging.DEBUG, logger="tilthex.methods.baseline_allocator"):
        bounded_least_squares(A, b, np.zeros(2), np.ones(2))

    assert "stalled" not in caplog.text


def test_feasible_hover_is_matched_exactly(hexa, hover_force):
    hover = BodyWrench(hover_force, np.zeros(3))

    result = hexa.baseline_allocate(hover, 0.0)

    assert result.alpha_star == 0.0
    assert result.residual < 1e-6
    assert result.u_star == pytest.approx(np.full(6, 3815.0), rel=1e-6)
    assert result.t_solve > 0.0


def test_tied_objectives_go_to_the_smaller_magnitude(hexa, hover_force):
    hover = BodyWrench(hover_force, np.zeros(3))

    result = hexa.baseline_allocate(hover, np.deg2rad(25))

    # every angle in [0, 25] deg costs the same
    assert result.objective == pytest.approx(0.5 * np.deg2rad(25), abs=1e-6)
    assert abs(np.rad2deg(result.alpha_star)) <= 1.0 + 1e-9


def test_lateral_force_needs_a_tilt(hexa):
    wrench = BodyWrench(np.array([5.0, 0.0, 34.335]), np.zeros(3))

    result = hexa.baseline_allocate(wrench, 0.0)

    # a small residual may buy a smaller tilt, nine degrees already fits exactly
    assert result.alpha_star != 0.0
    assert result.objective <= cost(np.deg2rad(9), 0.0, 0.5, 0.5)
    assert result.objective == pytest.approx(
        result.residual**2 + cost(result.alpha_star, 0.0, 0.5, 0.5)
    )


def test_unreachable_wrench_keeps_inputs_in_the_box(hexa):
    wrench = BodyWrench(np.array([0.0, 0.0, 200.0]), np.zeros(3))

    result = hexa.baseline_allocate(wrench, 0.0)

    assert result.residual > 1.0
    assert np.all(result.u_star >= 0.0)
    assert np.all(result.u_star <= hexa.params.u_max)


def test_coarser_grid_restricts_the_choice(hexa):
    wrench = BodyWrench(np.array([5.0, 0.0, 34.335]), np.zeros(3))
    config = BaselineConfig(alpha_grid_step=np.deg2rad(20))

    result = hexa.baseline_allocate(wrench, 0.0, config)

    steps = np.rad2deg(result.alpha_star) / 20.0
    assert steps == pytest.approx(round(steps), abs=1e-9)


def test_solve_time_leaves_out_the_grid_build(mocker, hover_force):
    hexa = Hexarotor()
    build = hexa._baseline_grid  # pylint: disable=protected-access

    def slow_build(step):
        time.sleep(0.5)
        return build(step)

    mocker.patch.object(hexa, "_baseline_grid", side_effect=slow_build)

    result = hexa.baseline_allocate(BodyWrench(hover_force, np.zeros(3)), 0.0)

    assert result.t_solve < 0.5


def test_failure_at_every_angle_raises(hexa, hover_force, mocker):
    mocker.patch(
        "tilthex.methods.baseline_allocator.bounded_least_squares",
        side_effect=SolverFailure("no convergence"),
    )

    with pytest.raises(AllocationFailure):
        hexa.baseline_allocate(BodyWrench(hover_force, np.zeros(3)), 0.0)


@pytest.mark.parametrize(
    "overrides", [{"alpha_grid_step": 0.0}, {"tol": 0.0}, {"max_iter": 0}]
)
def test_invalid_baseline_config(overrides):
    with pytest.raises(ConfigError):
        BaselineConfig(**overrides)
