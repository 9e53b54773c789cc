#! /usr/bin/env python
"""Test suite for the propeller wrench, the rigid-body dynamics and the servo"""
# pylint: disable=missing-function-docstring
import numpy as np
import pytest

from tilthex import (
    ContractViolation,
    Hexarotor,
    IntegrationFault,
    PlatformParams,
    SaturationError,
)
from tilthex.geometry import orthogonality_error, rot_z
from tilthex.methods.platform_model import (
    ActuatorState,
    DisturbanceWrench,
    RigidBodyState,
)

HOVER_INPUT = 3815.0  # m g / (6 c_f)


def test_rotor_one_sits_at_thirty_degrees(hexa):
    position, rotation = hexa.rotor_geometry(1, 0.0)

    assert position == pytest.approx([0.385 * np.cos(np.pi / 6), 0.385 * 0.5, 0.0])
    assert np.allclose(rotation, np.eye(3), atol=1e-12)


def test_adjacent_rotors_tilt_in_opposite_directions(hexa):
    alpha = np.deg2rad(20)

    _, first = hexa.rotor_geometry(1, alpha)
    _, second = hexa.rotor_geometry(2, alpha)

    # back in the arm frame, the tangential components flip sign between neighbours
    local_first = rot_z(-np.pi / 6) @ first[:, 2]
    local_second = rot_z(-np.pi / 2) @ second[:, 2]

    assert local_first == pytest.approx([0.0, np.sin(alpha), np.cos(alpha)])
    assert local_second == pytest.approx([0.0, -np.sin(alpha), np.cos(alpha)])
    assert ActuatorState(alpha=alpha).rotor_tilts.tolist() == pytest.approx(
        [-alpha, alpha, -alpha, alpha, -alpha, alpha]
    )


@pytest.mark.parametrize("index", [0, 7])
def test_rotor_index_out_of_range(hexa, index):
    with pytest.raises(ContractViolation):
        hexa.rotor_geometry(index, 0.0)


@pytest.mark.parametrize("alpha", [np.pi / 3, -np.pi / 3 - 0.01, 2.0])
def test_cant_angle_out_of_range(hexa, alpha):
    with pytest.raises(ContractViolation):
        hexa.rotor_geometry(1, alpha)


def test_propeller_wrench_at_max_spin(hexa):
    thrust, drag = hexa.propeller_wrench(1, 108.0, 0.0)

    assert thrust == pytest.approx([0.0, 0.0, 17.496])
    # rotor 1 spins with kappa = -1
    assert drag == pytest.approx([0.0, 0.0, -4.59e-5 * 11664.0])


def test_body_wrench_equals_allocation_matrix_product(hexa, rng):
    for _ in range(20):
        alpha = rng.uniform(np.deg2rad(-59), np.deg2rad(59))
        u = rng.uniform(0.0, hexa.params.u_max, 6)

        wrench = hexa.body_wrench(u, alpha)

        assert np.allclose(
            wrench.as_vector(), hexa.build_matrices(alpha).C @ u, atol=1e-9
        )


def test_body_wrench_sums_individual_propellers(hexa):
    alpha = np.deg2rad(25)
    u = np.array([1000.0, 2000.0, 3000.0, 4000.0, 5000.0, 6000.0])
    force, moment = np.zeros(3), np.zeros(3)
    for i in range(1, 7):
        thrust, drag = hexa.propeller_wrench(i, np.sqrt(u[i - 1]), alpha)
        position, _ = hexa.rotor_geometry(i, alpha)
        force += thrust
        moment += np.cross(position, thrust) + drag

    wrench = hexa.body_wrench(u, alpha)

    assert np.allclose(wrench.f, force, atol=1e-12)
    assert np.allclose(wrench.tau, moment, atol=1e-12)


def test_body_wrench_rejects_saturated_input(hexa):
    with pytest.raises(SaturationError):
        hexa.body_wrench(np.full(6, 12000.0), 0.0)
    with pytest.raises(SaturationError):
        hexa.body_wrench(np.array([-1.0, 0, 0, 0, 0, 0]), 0.0)


def test_uniform_inputs_have_zero_moment_at_any_angle(hexa):
    for alpha in np.deg2rad([-40.0, 0.0, 13.0, 55.0]):
        wrench = hexa.body_wrench(np.full(6, 5000.0), alpha)

        assert np.abs(wrench.tau).max() < 1e-9
        assert wrench.f == pytest.approx([0.0, 0.0, 6 * 1.5e-3 * 5000 * np.cos(alpha)])


def test_hover_stays_at_rest(hexa):
    state = RigidBodyState(p=np.array([0.0, 0.0, 1.0]))
    actuators = ActuatorState(u=np.full(6, HOVER_INPUT))

    for _ in range(100):
        state = hexa.dynamics_step(state, actuators, dt=1e-3)

    assert np.abs(state.v).max() < 1e-9
    assert state.p == pytest.approx([0.0, 0.0, 1.0], abs=1e-9)


def test_free_fall_matches_closed_form(hexa):
    state = RigidBodyState()

    for _ in range(500):
        state = hexa.dynamics_step(state, ActuatorState(), dt=1e-3)

    assert state.v[2] == pytest.approx(-9.81 * 0.5, rel=1e-9)
    assert state.p[2] == pytest.approx(-0.5 * 9.81 * 0.25, rel=1e-9)


def test_interaction_force_accelerates_the_body(hexa):
    actuators = ActuatorState(u=np.full(6, HOVER_INPUT))
    push = DisturbanceWrench(f_i=np.array([3.5, 0.0, 0.0]))

    state = hexa.dynamics_step(RigidBodyState(), actuators, push, dt=1e-2)

    assert state.v[0] == pytest.approx(1e-2, rel=1e-9)


def test_contact_model_is_evaluated_in_world_frame(hexa):
    actuators = ActuatorState(u=np.full(6, HOVER_INPUT))

    state = hexa.dynamics_step(
        RigidBodyState(),
        actuators,
        dt=1e-2,
        contact=lambda s: np.array([0.0, -7.0, 0.0]),
    )

    assert state.v[1] == pytest.approx(-2e-2, rel=1e-9)


def test_rotation_stays_orthonormal_while_spinning(hexa):
    state = RigidBodyState(omega=np.array([2.0, -1.0, 3.0]))

    for _ in range(2000):
        state = hexa.dynamics_step(state, ActuatorState(), dt=1e-3)

    assert orthogonality_error(state.R) < 1e-12


def test_energy_is_conserved_without_wrench_or_drag(hexa):
    params = hexa.params
    state = RigidBodyState(
        v=np.array([1.0, 0.0, 0.0]), omega=np.array([0.3, -0.2, 0.5])
    )

    def energy(s):
        kinetic = 0.5 * params.m * s.v @ s.v + 0.5 * s.omega @ params.J @ s.omega
        return kinetic + params.m * params.g_mag * s.p[2]

    start = energy(state)
    for _ in range(10000):
        state = hexa.dynamics_step(state, ActuatorState(), dt=1e-3)

    assert abs(energy(state) - start) <= 1e-6 * abs(start)


def test_non_finite_state_raises_integration_fault(hexa):
    state = RigidBodyState(v=np.array([np.inf, 0.0, 0.0]))

    with pytest.raises(IntegrationFault):
        hexa.dynamics_step(state, ActuatorState(), dt=1e-3)


def test_servo_reaches_time_constant_fraction(hexa):
    alpha, command = 0.0, np.deg2rad(20)

    for _ in range(5):
        alpha = hexa.servo_step(alpha, command, 1e-3)

    assert alpha / command == pytest.approx(1 - np.exp(-1), rel=1e-3)


def test_servo_clamps_to_admissible_range(hexa):
    assert hexa.servo_step(np.deg2rad(59.9), np.pi, 1.0) < np.pi / 3


def test_aero_drag_opposes_body_velocity():
    drag_hexa = Hexarotor(PlatformParams(aero_drag_lin=[0.1, 0.1, 0.2]))
    state = RigidBodyState(v=np.array([0.0, 0.0, -2.0]))

    f_a, tau_a = drag_hexa.aero_wrench(state, 0.0)

    assert f_a == pytest.approx([0.0, 0.0, 0.4])
    assert tau_a == pytest.approx([0.0, 0.0, 0.0])
