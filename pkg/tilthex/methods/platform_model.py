"""Rigid-body dynamics, propeller wrench and servo lag of the hexarotor"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Tuple

import numpy as np

from tilthex.errors import IntegrationFault, SaturationError
from tilthex.geometry import E3, orthonormalize, rot_x, rot_z, so3_exp
from tilthex.methods.base import N_ROTORS, Base
from tilthex.params import clamp_alpha

# world-frame force acting on the CoM as a function of the current state
ContactModel = Callable[["RigidBodyState"], np.ndarray]


def _zeros3() -> np.ndarray:
    return np.zeros(3)


@dataclass
class RigidBodyState:
    """Pose and twist of the body

    Attributes:
        p: position in the world frame [m], z up
        R: rotation body to world
        v: linear velocity in the world frame [m/s]
        omega: angular velocity in the body frame [rad/s]
    """

    p: np.ndarray = field(default_factory=_zeros3)
    R: np.ndarray = field(  # pylint: disable=invalid-name
        default_factory=lambda: np.eye(3)
    )
    v: np.ndarray = field(default_factory=_zeros3)
    omega: np.ndarray = field(default_factory=_zeros3)

    def copy(self) -> "RigidBodyState":
        """Deep copy, the arrays are not shared"""
        return RigidBodyState(
            self.p.copy(), self.R.copy(), self.v.copy(), self.omega.copy()
        )


@dataclass
class ActuatorState:
    """Collective cant angle, its command and the squared spin rates"""

    alpha: float = 0.0
    alpha_cmd: float = 0.0
    u: np.ndarray = field(default_factory=lambda: np.zeros(N_ROTORS))

    @property
    def rotor_tilts(self) -> np.ndarray:
        """Alternating per-rotor tilt (-1)^i * alpha"""
        return np.array([(-1.0) ** i * self.alpha for i in range(1, N_ROTORS + 1)])


@dataclass
class BodyWrench:
    """Force and moment acting on the body, expressed in the body frame"""

    f: np.ndarray = field(default_factory=_zeros3)
    tau: np.ndarray = field(default_factory=_zeros3)

    def as_vector(self) -> np.ndarray:
        """Force stacked on moment"""
        return np.concatenate((self.f, self.tau))

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "BodyWrench":
        """Inverse of as_vector"""
        return cls(np.array(vec[:3], dtype=float), np.array(vec[3:], dtype=float))


@dataclass
class DisturbanceWrench:
    """Aerodynamic and interaction terms in the body frame

    The interaction acts at the CoM, its moment is identically zero.
    """

    f_a: np.ndarray = field(default_factory=_zeros3)
    tau_a: np.ndarray = field(default_factory=_zeros3)
    f_i: np.ndarray = field(default_factory=_zeros3)


class PlatformModel(Base):
    """Responsible for the propeller wrench and the Newton-Euler dynamics"""

    def rotor_geometry(self, i: int, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        Position and orientation of the i-th propeller frame

        Args:
            i: rotor index, 1..6
            alpha: collective cant angle [rad]

        Returns:
            Spinning center in the body frame [m] and rotation propeller to body

        Raises:
            ContractViolation: rotor index or cant angle out of range

        Examples:
            >>> p, R = hexa.rotor_geometry(1, 0.0)
            >>> [round(float(x), 5) for x in p]
            [0.33342, 0.1925, 0.0]
            >>> _, R = hexa.rotor_geometry(1, np.deg2rad(25))
            >>> [round(float(x), 5) for x in R[:, 2]]
            [-0.21131, 0.366, 0.90631]
        """
        self._check_rotor_index(i)
        self._check_alpha(alpha)
        yaw = self._arm_angles[i - 1]
        rot = rot_z(yaw) @ rot_x((-1.0) ** i * alpha)
        return self._arm_positions[i - 1].copy(), rot

    def propeller_wrench(
        self, i: int, omega_i: float, alpha: float
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Thrust and drag moment of one propeller, both along its spin axis

        Args:
            i: rotor index, 1..6
            omega_i: spin rate [Hz]
            alpha: collective cant angle [rad]

        Returns:
            Thrust [N] and drag moment [N m], in the body frame

        Raises:
            SaturationError: spin rate outside [0, omega_max]

        Examples:
            >>> f, tau_d = hexa.propeller_wrench(1, 61.766, 0.0)
            >>> round(float(f[2]), 3), round(float(tau_d[2]), 5)
            (5.723, -0.17511)
        """
        if not -1e-12 <= omega_i <= self.params.omega_max + 1e-9:
            raise SaturationError(
                f"Spin rate { omega_i } Hz outside [0, { self.params.omega_max }]"
            )
        _, rot = self.rotor_geometry(i, alpha)
        axis = rot[:, 2]
        u_i = omega_i**2
        thrust = self.params.c_f * u_i * axis
        drag = self.params.kappa[i - 1] * self.params.c_tau * u_i * axis
        return thrust, drag

    def _check_inputs(self, u: np.ndarray) -> None:
        if np.any(u < -1e-9) or np.any(u > self.params.u_max * (1 + 1e-12)):
            raise SaturationError(f"Control input outside [0, omega_max^2]: { u }")

    def body_wrench(self, u: np.ndarray, alpha: float) -> BodyWrench:
        """
        Control wrench generated by the six propellers

        Args:
            u: squared spin rates [Hz^2]
            alpha: collective cant angle [rad]

        Returns:
            Sum of thrusts and sum of moments about the CoM

        Raises:
            SaturationError: an input outside [0, omega_max^2]

        Examples:
            >>> wrench = hexa.body_wrench(np.full(6, 3815.0), 0.0)
            >>> round(float(wrench.f[2]), 3), float(np.abs(wrench.tau).max()) < 1e-12
            (34.335, True)
        """
        u = np.asarray(u, dtype=float)
        self._check_inputs(u)
        self._check_alpha(alpha)
        axes = self._rotor_axes(alpha)
        thrusts = self.params.c_f * u[:, None] * axes
        drags = (self.params.kappa * self.params.c_tau * u)[:, None] * axes
        moment = np.cross(self._arm_positions, thrusts).sum(axis=0) + drags.sum(axis=0)
        return BodyWrench(thrusts.sum(axis=0), moment)

    def rotor_thrusts(self, u: np.ndarray, alpha: float) -> np.ndarray:
        """Per-rotor thrust vectors in the body frame, one per row"""
        axes = self._rotor_axes(alpha)
        return self.params.c_f * np.asarray(u, dtype=float)[:, None] * axes

    def aero_wrench(
        self, state: RigidBodyState, alpha: float  # pylint: disable=unused-argument
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Linear drag surrogate for the aerodynamic force and moment

        The surrogate does not depend on the cant angle, the argument is kept
        so that richer models can be swapped in.

        Examples:
            >>> state = RigidBodyState(v=np.array([1.0, 0.0, 0.0]))
            >>> drag_hexa = Hexarotor(PlatformParams(aero_drag_lin=[0.2, 0.2, 0.3]))
            >>> f_a, tau_a = drag_hexa.aero_wrench(state, 0.0)
            >>> [float(x) + 0.0 for x in f_a], [float(x) + 0.0 for x in tau_a]
            ([-0.2, 0.0, 0.0], [0.0, 0.0, 0.0])
        """
        f_a = -self.params.aero_drag_lin * (state.R.T @ state.v)
        tau_a = -self.params.aero_drag_ang * state.omega
        return f_a, tau_a

    def servo_step(self, alpha: float, alpha_cmd: float, dt: float) -> float:
        """
        Advance the first-order servo by its exact discretization

        Args:
            alpha: current cant angle [rad]
            alpha_cmd: commanded cant angle [rad]
            dt: step [s]

        Returns:
            The cant angle after dt, clamped to the admissible interval

        Examples:
            >>> round(float(np.rad2deg(hexa.servo_step(0.0, np.deg2rad(10), 5e-3))), 4)
            6.3212
        """
        decay = np.exp(-dt / self.params.tau_alpha)
        return clamp_alpha(alpha_cmd + (alpha - alpha_cmd) * decay)

    def _derivative(
        self,
        state: RigidBodyState,
        force_body: np.ndarray,
        torque_body: np.ndarray,
        contact: Optional[ContactModel],
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Linear and angular acceleration for a given state"""
        params = self.params
        force_world = state.R @ force_body
        if contact is not None:
            force_world = force_world + contact(state)
        accel = force_world / params.m - params.g_mag * E3
        gyro = np.cross(state.omega, params.J @ state.omega)
        omega_dot = self._inertia_inv @ (torque_body - gyro)
        return accel, omega_dot

    def dynamics_step(
        self,
        state: RigidBodyState,
        actuators: ActuatorState,
        disturbances: Optional[DisturbanceWrench] = None,
        dt: float = 1e-3,
        contact: Optional[ContactModel] = None,
    ) -> RigidBodyState:
        """
        One RK4 step of the Newton-Euler equations

        Inputs are held constant over the step. The rotation of every stage is
        obtained from the exponential map and the result is re-orthonormalized.

        Args:
            state: current state
            actuators: cant angle and squared spin rates, held over the step
            disturbances: aerodynamic and interaction terms, body frame
            dt: step [s]
            contact:
                Optional world-frame force model re-evaluated at every stage,
                used for stiff contacts

        Returns:
            The state after dt

        Raises:
            IntegrationFault: non-finite derivative

        Examples:
            >>> hover = ActuatorState(u=np.full(6, 3815.0))
            >>> nxt = hexa.dynamics_step(RigidBodyState(), hover, dt=1e-3)
            >>> bool(np.abs(nxt.v).max() < 1e-9)
            True
        """
        dist = disturbances if disturbances is not None else DisturbanceWrench()
        wrench = self.body_wrench(actuators.u, actuators.alpha)
        force_body = wrench.f + dist.f_a + dist.f_i
        torque_body = wrench.tau + dist.tau_a

        def stage(p, rot, v, omega):
            accel, omega_dot = self._derivative(
                RigidBodyState(p, rot, v, omega), force_body, torque_body, contact
            )
            return v, accel, omega_dot

        p0, r0, v0, w0 = state.p, state.R, state.v, state.omega
        k1 = stage(p0, r0, v0, w0)
        w1 = w0
        r_half = r0 @ so3_exp(0.5 * dt * w1)
        k2 = stage(
            p0 + 0.5 * dt * k1[0], r_half, v0 + 0.5 * dt * k1[1], w0 + 0.5 * dt * k1[2]
        )
        w2 = w0 + 0.5 * dt * k1[2]
        r_half = r0 @ so3_exp(0.5 * dt * w2)
        k3 = stage(
            p0 + 0.5 * dt * k2[0], r_half, v0 + 0.5 * dt * k2[1], w0 + 0.5 * dt * k2[2]
        )
        w3 = w0 + 0.5 * dt * k2[2]
        k4 = stage(
            p0 + dt * k3[0], r0 @ so3_exp(dt * w3), v0 + dt * k3[1], w0 + dt * k3[2]
        )
        w4 = w0 + dt * k3[2]

        for k in (k1, k2, k3, k4):
            if not all(np.all(np.isfinite(part)) for part in k):
                raise IntegrationFault(f"Non-finite derivative at state { state }")

        def combine(index):
            return (k1[index] + 2 * k2[index] + 2 * k3[index] + k4[index]) / 6.0

        omega_mean = (w1 + 2 * w2 + 2 * w3 + w4) / 6.0
        return replace(
            state,
            p=p0 + dt * combine(0),
            R=orthonormalize(r0 @ so3_exp(dt * omega_mean)),
            v=v0 + dt * combine(1),
            omega=w0 + dt * combine(2),
        )
