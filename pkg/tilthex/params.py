#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Physical parameters of a star-shaped cant-tilting hexarotor"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from tilthex.errors import ConfigError

__license__ = "MIT"

# Cant angles live in [-pi/3, pi/3); the open end is approached to within this
ALPHA_EPS = 1e-9
ALPHA_MIN = -np.pi / 3
ALPHA_MAX = np.pi / 3 - ALPHA_EPS


def _default_kappa() -> np.ndarray:
    return np.array([(-1.0) ** i for i in range(1, 7)])


def clamp_alpha(alpha: float) -> float:
    """Clamp a cant angle into the admissible interval

    Examples:
        >>> clamp_alpha(2.0) == ALPHA_MAX
        True
        >>> clamp_alpha(0.1)
        0.1
    """
    return float(min(max(alpha, ALPHA_MIN), ALPHA_MAX))


# pylint: disable=too-many-instance-attributes,invalid-name
@dataclass(frozen=True, eq=False)
class PlatformParams:
    """Constants of the platform, defaults from the case-study hexarotor

    Attributes:
        m: mass [kg]
        J: 3x3 inertia [kg m^2]
        l: arm length [m]
        c_f: thrust coefficient [N/Hz^2]
        c_tau: drag coefficient [N m/Hz^2]
        omega_max: maximum spin rate [Hz]
        tau_alpha: servo time constant [s]
        g_mag: gravity magnitude [m/s^2], applied along -z of the world frame
        kappa: spin direction signs, (-1)^i for rotor i = 1..6
        aero_drag_lin: linear translational drag coefficients [N s/m]
        aero_drag_ang: angular drag coefficients [N m s/rad]

    Examples:
        >>> params = PlatformParams()
        >>> params.m, params.omega_max
        (3.5, 108.0)
        >>> round(params.weight, 3)
        34.335
        >>> PlatformParams(m=-1.0)
        Traceback (most recent call last):
        ...
        tilthex.errors.ConfigError: mass must be positive, got -1.0
    """

    m: float = 3.5
    J: np.ndarray = field(default_factory=lambda: np.diag([0.147, 0.155, 0.251]))
    l: float = 0.385
    c_f: float = 1.5e-3
    c_tau: float = 4.59e-5
    omega_max: float = 108.0
    tau_alpha: float = 5e-3
    g_mag: float = 9.81
    kappa: np.ndarray = field(default_factory=_default_kappa)
    aero_drag_lin: np.ndarray = field(default_factory=lambda: np.zeros(3))
    aero_drag_ang: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        # coerce sequences coming from JSON into arrays
        for name in ("J", "kappa", "aero_drag_lin", "aero_drag_ang"):
            object.__setattr__(self, name, np.array(getattr(self, name), dtype=float))
        self._validate()

    def _validate(self) -> None:
        """Check the invariants, raising ConfigError on the first violation"""
        if not self.m > 0:
            raise ConfigError(f"mass must be positive, got { self.m }")
        if self.J.shape != (3, 3):
            raise ConfigError(f"inertia must be 3x3, got shape { self.J.shape }")
        if not np.allclose(self.J, self.J.T, atol=1e-12):
            raise ConfigError("inertia must be symmetric")
        if np.min(np.linalg.eigvalsh(self.J)) <= 0:
            raise ConfigError("inertia must be positive definite")
        if not self.l > 0:
            raise ConfigError(f"arm length must be positive, got { self.l }")
        if self.c_f < 0 or self.c_tau < 0:
            raise ConfigError("thrust and drag coefficients must be nonnegative")
        if not self.omega_max > 0:
            raise ConfigError("omega_max must be positive")
        if not self.tau_alpha > 0:
            raise ConfigError("tau_alpha must be positive")
        if not np.array_equal(self.kappa, _default_kappa()):
            raise ConfigError("kappa must alternate -1, +1 starting with rotor 1")
        for name in ("aero_drag_lin", "aero_drag_ang"):
            if getattr(self, name).shape != (3,):
                raise ConfigError(f"{ name } must be a 3-vector")

    @property
    def u_max(self) -> float:
        """Upper bound of a squared spin rate [Hz^2]"""
        return self.omega_max**2

    @property
    def weight(self) -> float:
        """Gravity force magnitude m*g [N]"""
        return self.m * self.g_mag

    @property
    def f_max(self) -> float:
        """Largest thrust of the six rotors combined, all aligned [N]"""
        return 6 * self.c_f * self.u_max

    @classmethod
    def wall_platform(cls, **overrides: Any) -> "PlatformParams":
        """Heavier variant used for the wall-inspection task"""
        values: Dict[str, Any] = {
            "m": 3.8,
            "J": np.diag([0.107, 0.103, 0.205]),
        }
        values.update(overrides)
        return cls(**values)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PlatformParams":
        """Build from a JSON mapping, rejecting unknown keys

        A 3-vector given for ``J`` is read as its diagonal.
        """
        allowed = set(cls.__dataclass_fields__)  # pylint: disable=no-member
        unknown = set(data) - allowed
        if unknown:
            raise ConfigError(f"Unknown platform keys: { sorted(unknown) }")
        values = dict(data)
        if "J" in values and np.ndim(values["J"]) == 1:
            values["J"] = np.diag(values["J"])
        try:
            return cls(**values)
        except (TypeError, ValueError) as err:
            raise ConfigError(str(err)) from err

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible mapping of every field"""
        return {
            "m": self.m,
            "J": self.J.tolist(),
            "l": self.l,
            "c_f": self.c_f,
            "c_tau": self.c_tau,
            "omega_max": self.omega_max,
            "tau_alpha": self.tau_alpha,
            "g_mag": self.g_mag,
            "kappa": self.kappa.tolist(),
            "aero_drag_lin": self.aero_drag_lin.tolist(),
            "aero_drag_ang": self.aero_drag_ang.tolist(),
        }


# pylint: enable=too-many-instance-attributes,invalid-name
