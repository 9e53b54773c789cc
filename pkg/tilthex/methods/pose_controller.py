"""Geometric full-pose controller producing the desired body wrench"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from tilthex.errors import ConfigError
from tilthex.geometry import E3, vee
from tilthex.methods.platform_model import BodyWrench, PlatformModel, RigidBodyState

GAIN_NAMES = ("K_pp", "K_pd", "K_pi", "K_op", "K_od", "K_oi")


def _diagonal(value: Any, name: str) -> np.ndarray:
    """Diagonal of a gain given as a scalar, a 3-vector or a 3x3 diagonal matrix"""
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(3, float(arr))
    elif arr.shape == (3, 3):
        if np.any(arr - np.diag(np.diag(arr))):
            raise ConfigError(f"{ name } must be diagonal")
        arr = np.diag(arr).copy()
    if arr.shape != (3,):
        raise ConfigError(
            f"{ name } must have three diagonal entries, got { arr.shape }"
        )
    if np.any(arr <= 0):
        raise ConfigError(f"{ name } must be positive definite, got { arr.tolist() }")
    return arr


# pylint: disable=invalid-name
@dataclass(frozen=True, eq=False)
class Gains:
    """Diagonal positive-definite gains, stored as their diagonals

    Examples:
        >>> Gains.free_flight().K_pp.tolist()
        [30.0, 30.0, 70.0]
        >>> Gains(K_od=[1.0, 0.0, 1.0])
        Traceback (most recent call last):
        ...
        tilthex.errors.ConfigError: K_od must be positive definite, got [1.0, 0.0, 1.0]
    """

    K_pp: np.ndarray = field(default_factory=lambda: np.array([30.0, 30.0, 70.0]))
    K_pd: np.ndarray = field(default_factory=lambda: np.full(3, 10.0))
    K_pi: np.ndarray = field(default_factory=lambda: np.array([30.0, 30.0, 40.0]))
    K_op: np.ndarray = field(default_factory=lambda: np.array([20.0, 20.0, 5.0]))
    K_od: np.ndarray = field(default_factory=lambda: np.full(3, 10.0))
    K_oi: np.ndarray = field(default_factory=lambda: np.array([0.1, 0.1, 1.0]))

    def __post_init__(self):
        for name in GAIN_NAMES:
            object.__setattr__(self, name, _diagonal(getattr(self, name), name))

    @classmethod
    def free_flight(cls) -> "Gains":
        """Gains of the free-flight and Monte-Carlo scenarios"""
        return cls()

    @classmethod
    def wall_task(cls) -> "Gains":
        """Gains of the wall inspection task"""
        return cls(
            K_pp=[6.0, 6.0, 15.0],
            K_pd=[10.0, 10.0, 20.0],
            K_pi=1.0,
            K_op=10.0,
            K_od=[1.0, 2.0, 2.0],
            K_oi=[0.1, 0.01, 0.1],
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base: Optional["Gains"] = None) -> "Gains":
        """Override some or all gains of base (the free-flight gains by default)"""
        unknown = set(data) - set(GAIN_NAMES)
        if unknown:
            raise ConfigError(f"Unknown gain keys: { sorted(unknown) }")
        base = base if base is not None else cls()
        merged = {name: data.get(name, getattr(base, name)) for name in GAIN_NAMES}
        return cls(**merged)

    def to_dict(self) -> Dict[str, list]:
        """Diagonals as lists"""
        return {name: getattr(self, name).tolist() for name in GAIN_NAMES}


@dataclass
class ControllerRefs:
    """Reference pose, twist and their derivatives, world frame except omega_r"""

    p_r: np.ndarray = field(default_factory=lambda: np.zeros(3))
    R_r: np.ndarray = field(default_factory=lambda: np.eye(3))
    v_r: np.ndarray = field(default_factory=lambda: np.zeros(3))
    omega_r: np.ndarray = field(default_factory=lambda: np.zeros(3))
    a_r: np.ndarray = field(default_factory=lambda: np.zeros(3))
    omegadot_r: np.ndarray = field(default_factory=lambda: np.zeros(3))

    @classmethod
    def hold(cls, position: np.ndarray) -> "ControllerRefs":
        """Level hover at a fixed position"""
        return cls(p_r=np.asarray(position, dtype=float))


@dataclass
class PoseErrors:
    """Tracking errors, e_R is the vee of the skew part of R_r^T R"""

    e_p: np.ndarray
    e_R: np.ndarray
    e_v: np.ndarray
    e_omega: np.ndarray


# pylint: enable=invalid-name


@dataclass(frozen=True)
class ControllerConfig:
    """Integral clamps and the interaction feed-forward gain

    Attributes:
        integral_clamp_p: per-axis bound on the position error integral [m s]
        integral_clamp_R: per-axis bound on the attitude error integral [rad s]
        interaction_feedforward: share of the measured interaction force cancelled
    """

    integral_clamp_p: float = 2.0
    integral_clamp_R: float = 1.0  # pylint: disable=invalid-name
    interaction_feedforward: float = 1.0

    def __post_init__(self):
        if self.integral_clamp_p < 0 or self.integral_clamp_R < 0:
            raise ConfigError("Integral clamps must be nonnegative")
        if not 0.0 <= self.interaction_feedforward <= 1.0:
            raise ConfigError(
                "interaction_feedforward must lie in [0, 1], "
                f"got { self.interaction_feedforward }"
            )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ControllerConfig":
        """Build from a scenario section, rejecting unknown keys"""
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"Unknown controller keys: { sorted(unknown) }")
        return cls(**{key: float(value) for key, value in data.items()})


@dataclass
class ControllerState:
    """Clamped error integrals, advanced with the trapezoidal rule

    The integrals stay at zero until a second sample is available.
    """

    int_e_p: np.ndarray = field(default_factory=lambda: np.zeros(3))
    int_e_R: np.ndarray = field(  # pylint: disable=invalid-name
        default_factory=lambda: np.zeros(3)
    )
    last_e_p: Optional[np.ndarray] = None
    last_e_R: Optional[np.ndarray] = None  # pylint: disable=invalid-name
    t_last: Optional[float] = None

    def advance(
        self, errors: PoseErrors, dt: float, config: ControllerConfig
    ) -> None:
        """Fold one more error sample into the integrals"""
        if self.last_e_p is not None and self.last_e_R is not None:
            self.int_e_p = np.clip(
                self.int_e_p + 0.5 * dt * (self.last_e_p + errors.e_p),
                -config.integral_clamp_p,
                config.integral_clamp_p,
            )
            self.int_e_R = np.clip(
                self.int_e_R + 0.5 * dt * (self.last_e_R + errors.e_R),
                -config.integral_clamp_R,
                config.integral_clamp_R,
            )
        self.last_e_p = errors.e_p.copy()
        self.last_e_R = errors.e_R.copy()
        self.t_last = dt if self.t_last is None else self.t_last + dt


@dataclass
class ControllerDiagnostics:
    """Drift terms that the wrench cancels and the virtual inputs it realizes"""

    f_e: np.ndarray
    tau_e: np.ndarray
    w_p: np.ndarray
    w_o: np.ndarray


class PoseController(PlatformModel):
    """Responsible for the SE(3) tracking law and its feedback linearization"""

    @staticmethod
    def pose_errors(est: RigidBodyState, refs: ControllerRefs) -> PoseErrors:
        """
        Position, attitude, velocity and angular velocity errors

        Examples:
            >>> from tilthex.geometry import rot_z
            >>> errs = hexa.pose_errors(RigidBodyState(R=rot_z(0.2)), ControllerRefs())
            >>> [round(float(x), 5) + 0.0 for x in errs.e_R]
            [0.0, 0.0, 0.19867]
        """
        rel = refs.R_r.T @ est.R
        return PoseErrors(
            e_p=est.p - refs.p_r,
            e_R=0.5 * vee(rel - rel.T),
            e_v=est.v - refs.v_r,
            e_omega=est.omega - est.R.T @ refs.R_r @ refs.omega_r,
        )

    @staticmethod
    def virtual_inputs(
        errors: PoseErrors,
        state: ControllerState,
        gains: Gains,
        refs: ControllerRefs,
        dt: float,
        config: Optional[ControllerConfig] = None,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        PID laws on the translational and rotational errors

        The integrals in state are advanced in place before they are used.

        Args:
            errors: current tracking errors
            state: integrator state, owned by the control loop
            gains: diagonal gains
            refs: references providing the feed-forward accelerations
            dt: control period [s]
            config: integral clamps

        Returns:
            Desired linear acceleration w_p and angular acceleration w_o

        Examples:
            >>> zero = np.zeros(3)
            >>> errs = PoseErrors(np.array([1.0, 0.0, 0.0]), zero, zero, zero)
            >>> w_p, w_o = hexa.virtual_inputs(
            ...     errs, ControllerState(), Gains.free_flight(), ControllerRefs(), 0.01
            ... )
            >>> w_p.tolist()
            [-30.0, 0.0, 0.0]
        """
        if dt <= 0:
            raise ConfigError(f"Control period must be positive, got { dt }")
        state.advance(errors, dt, config if config is not None else ControllerConfig())
        w_p = (
            refs.a_r
            - gains.K_pd * errors.e_v
            - gains.K_pp * errors.e_p
            - gains.K_pi * state.int_e_p
        )
        w_o = (
            refs.omegadot_r
            - gains.K_od * errors.e_omega
            - gains.K_op * errors.e_R
            - gains.K_oi * state.int_e_R
        )
        return w_p, w_o

    def drift_terms(
        self, est: RigidBodyState, alpha: float, f_i: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Accelerations of the platform under zero control wrench"""
        params = self.params
        f_a, tau_a = self.aero_wrench(est, alpha)
        f_e = -params.g_mag * E3 + est.R @ (f_a + f_i) / params.m
        tau_e = self._inertia_inv @ (tau_a - np.cross(est.omega, params.J @ est.omega))
        return f_e, tau_e

    def desired_wrench(
        self,
        virtuals: Tuple[np.ndarray, np.ndarray],
        est: RigidBodyState,
        alpha: float,
        f_i_meas: np.ndarray,
    ) -> BodyWrench:
        """
        Control wrench that imposes the virtual inputs on the estimated state

        Args:
            virtuals: (w_p, w_o)
            est: estimated state
            alpha: cant angle the aerodynamic model is evaluated at [rad]
            f_i_meas: measured interaction force, body frame [N]

        Returns:
            Desired force and moment, body frame

        Examples:
            >>> zero = (np.zeros(3), np.zeros(3))
            >>> wrench = hexa.desired_wrench(zero, RigidBodyState(), 0.0, np.zeros(3))
            >>> [round(float(x), 3) for x in wrench.f]
            [0.0, 0.0, 34.335]
            >>> pushed = hexa.desired_wrench(
            ...     zero, RigidBodyState(), 0.0, np.array([-10.0, 0.0, 0.0])
            ... )
            >>> [round(float(x), 3) for x in pushed.f]
            [10.0, 0.0, 34.335]
        """
        w_p, w_o = virtuals
        f_e, tau_e = self.drift_terms(est, alpha, np.asarray(f_i_meas, dtype=float))
        params = self.params
        force = params.m * est.R.T @ (w_p - f_e)
        torque = params.J @ (w_o - tau_e)
        return BodyWrench(force, torque)

    def control_step(
        self,
        est: RigidBodyState,
        refs: ControllerRefs,
        state: ControllerState,
        gains: Gains,
        alpha: float,
        f_i_meas: np.ndarray,
        dt: float,
        config: Optional[ControllerConfig] = None,
    ) -> Tuple[BodyWrench, ControllerState, ControllerDiagnostics]:
        """
        Errors, virtual inputs and desired wrench for one control period

        Args:
            est: estimated state
            refs: references at the current time
            state: integrator state, advanced in place
            gains: diagonal gains
            alpha: current cant angle [rad]
            f_i_meas: measured interaction force, body frame [N]
            dt: control period [s]
            config: integral clamps and the interaction feed-forward gain

        Returns:
            The desired wrench, the integrator state and the diagnostics

        Examples:
            >>> wrench, _, _ = hexa.control_step(
            ...     RigidBodyState(), ControllerRefs(), ControllerState(),
            ...     Gains.free_flight(), 0.0, np.zeros(3), 0.01
            ... )
            >>> [round(float(x), 3) + 0.0 for x in wrench.as_vector()]
            [0.0, 0.0, 34.335, 0.0, 0.0, 0.0]
        """
        config = config if config is not None else ControllerConfig()
        errors = self.pose_errors(est, refs)
        w_p, w_o = self.virtual_inputs(errors, state, gains, refs, dt, config)
        f_i = config.interaction_feedforward * np.asarray(f_i_meas, dtype=float)
        wrench = self.desired_wrench((w_p, w_o), est, alpha, f_i)
        f_e, tau_e = self.drift_terms(est, alpha, f_i)
        return wrench, state, ControllerDiagnostics(f_e, tau_e, w_p, w_o)
