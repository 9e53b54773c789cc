"""The Base class for all hexarotor methods"""
from __future__ import annotations

from typing import TYPE_CHECKING, Optional

import numpy as np

from tilthex.errors import ConfigError, ContractViolation
from tilthex.params import ALPHA_MIN, PlatformParams

if TYPE_CHECKING:
    from tilthex.methods.force_polytope import PolytopeLUT

# We're designing class to be lazy by default, and not build the polytope
# table until it is explicitly requested by the user

N_ROTORS = 6


class Base:
    """Base attributes and methods shared by every hexarotor mixin"""

    def __init__(
        self,
        params: Optional[PlatformParams] = None,
        lut_step: float = float(np.deg2rad(1.0)),
    ):
        """Initialize a hexarotor, validate the LUT grid step"""
        self._validate_lut_step(lut_step)
        self._params = params if params is not None else PlatformParams()
        self._lut_step = lut_step

        # arm directions do not depend on the cant angle
        self._arm_angles = np.pi / 6 + np.arange(N_ROTORS) * np.pi / 3
        self._tilt_signs = np.array([(-1.0) ** i for i in range(1, N_ROTORS + 1)])
        self._arm_positions = self._params.l * np.column_stack(
            (
                np.cos(self._arm_angles),
                np.sin(self._arm_angles),
                np.zeros(N_ROTORS),
            )
        )

        self._inertia_inv = np.linalg.inv(self._params.J)

        # attributes which are expensive to build
        self._lut: Optional["PolytopeLUT"] = None

    @property
    def params(self) -> PlatformParams:
        """Physical constants of the platform"""
        return self._params

    @property
    def lut_step(self) -> float:
        """Grid step of the polytope LUT [rad]"""
        return self._lut_step

    @property
    def lut(self) -> "PolytopeLUT":
        """Zero-moment polytopes on the cant-angle grid, built on first access"""
        if self._lut is None:
            # pylint: disable=no-member
            self._lut = self.build_lut()  # type: ignore[attr-defined]
            # pylint: enable=no-member

        return self._lut

    @lut.setter
    def lut(self, table: "PolytopeLUT") -> None:
        """Install a table loaded from disk instead of building one"""
        self._lut = table

    @staticmethod
    def _validate_lut_step(lut_step: float) -> None:
        """Run basic validation on the user supplied grid step"""
        if not 0 < lut_step <= np.deg2rad(60.0):
            raise ConfigError(
                f"LUT step must lie in (0, 60] degrees, got { np.rad2deg(lut_step) }"
            )

    @staticmethod
    def _check_rotor_index(i: int) -> None:
        if not 1 <= i <= N_ROTORS:
            raise ContractViolation(f"Rotor index must lie in 1..6, got { i }")

    @staticmethod
    def _check_alpha(alpha: float) -> None:
        # the clamped upper end sits an epsilon below pi/3
        if not ALPHA_MIN - 1e-12 <= alpha < np.pi / 3:
            raise ContractViolation(
                f"Cant angle must lie in [-60, 60) degrees, got { np.rad2deg(alpha) }"
            )

    def _rotor_axes(self, alpha: float) -> np.ndarray:
        """Unit spin axes of all rotors in the body frame, one per row"""
        tilts = self._tilt_signs * alpha
        sin_tilt = np.sin(tilts)
        return np.column_stack(
            (
                sin_tilt * np.sin(self._arm_angles),
                -sin_tilt * np.cos(self._arm_angles),
                np.full(N_ROTORS, np.cos(alpha)),
            )
        )
