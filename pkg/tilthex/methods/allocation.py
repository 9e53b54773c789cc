"""Cant-angle dependent allocation matrices and pseudo-inverse allocation"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from tilthex.errors import ContractViolation, SingularAllocationError
from tilthex.methods.base import Base
from tilthex.methods.platform_model import BodyWrench

RANK_THRESHOLD = 1e-9


# pylint: disable=invalid-name
@dataclass(frozen=True, eq=False)
class AllocationMatrices:
    """Maps from squared spin rates to the body wrench

    Attributes:
        F: 3x6 force matrix [N/Hz^2]
        M: 3x6 moment matrix [N m/Hz^2]
        C: 6x6 stack of F on M
        S: 6x3 pair-selection matrix, identity on zeros
    """

    F: np.ndarray
    M: np.ndarray
    C: np.ndarray
    S: np.ndarray

    @property
    def sigma_min(self) -> float:
        """Smallest singular value of C"""
        return float(linalg.svdvals(self.C)[-1])

    @property
    def full_rank(self) -> bool:
        """Whether force and moment can be assigned independently"""
        return self.sigma_min > RANK_THRESHOLD


# pylint: enable=invalid-name


@dataclass
class ControlInput:
    """Squared spin rates [Hz^2] and whether any of them was clamped"""

    u: np.ndarray
    saturated: bool = False


def spin_rates(u: np.ndarray) -> np.ndarray:
    """
    Spin rates [Hz] from squared spin rates [Hz^2]

    Raises:
        ContractViolation: a negative input

    Examples:
        >>> spin_rates(np.array([11664.0, 0.0])).tolist()
        [108.0, 0.0]
    """
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ContractViolation(f"Squared spin rates must be nonnegative: { u }")
    return np.sqrt(u)


class Allocation(Base):
    """Responsible for the allocation matrix and the wrench-to-input map"""

    def build_matrices(self, alpha: float) -> AllocationMatrices:
        """
        Allocation matrices at a given cant angle

        Column i of F is c_f times the spin axis of rotor i; column i of M is the
        moment of that thrust about the CoM plus the rotor drag moment.

        Args:
            alpha: collective cant angle [rad]

        Returns:
            F, M, their stack C and the pair-selection matrix S

        Examples:
            >>> mats = hexa.build_matrices(0.0)
            >>> float(mats.F[2, 0]), mats.full_rank
            (0.0015, False)
            >>> hexa.build_matrices(np.deg2rad(25)).full_rank
            True
        """
        self._check_alpha(alpha)
        params = self.params
        axes = self._rotor_axes(alpha)
        force = (params.c_f * axes).T
        moment = (
            np.cross(self._arm_positions, params.c_f * axes)
            + (params.kappa * params.c_tau)[:, None] * axes
        ).T
        selection = np.vstack((np.eye(3), np.zeros((3, 3))))
        return AllocationMatrices(
            F=force, M=moment, C=np.vstack((force, moment)), S=selection
        )

    def allocate(
        self, wrench: BodyWrench, alpha: float, strict: bool = True
    ) -> ControlInput:
        """
        Squared spin rates realizing a desired body wrench

        The 6x6 system is solved directly when C is invertible. Components are
        then clamped to [0, omega_max^2] without redistribution.

        Args:
            wrench: desired force and moment, body frame
            alpha: cant angle the allocation is evaluated at [rad]
            strict:
                When False, a rank-deficient C falls back to the minimum-norm
                least-squares pseudo-inverse instead of raising

        Returns:
            The clamped input and a flag telling whether any clamp engaged

        Raises:
            SingularAllocationError: C is rank deficient and strict is True

        Examples:
            >>> hover = BodyWrench(np.array([0.0, 0.0, 34.335]), np.zeros(3))
            >>> res = hexa.allocate(hover, np.deg2rad(25))
            >>> round(float(res.u[0]), 1), res.saturated
            (4209.4, False)
            >>> hexa.allocate(hover, 0.0)
            Traceback (most recent call last):
            ...
            tilthex.errors.SingularAllocationError: ...
        """
        mats = self.build_matrices(alpha)
        target = wrench.as_vector()
        if not np.all(np.isfinite(target)):
            raise ContractViolation(f"Desired wrench is not finite: { target }")

        if mats.full_rank:
            u = np.linalg.solve(mats.C, target)
        elif strict:
            raise SingularAllocationError(
                f"Allocation matrix is singular at alpha = { np.rad2deg(alpha) } deg"
            )
        else:
            u = linalg.lstsq(mats.C, target)[0]

        u_max = self.params.u_max
        # round-off below this is not reported as saturation
        slack = 1e-9 * u_max
        saturated = bool(np.any(u < -slack) or np.any(u > u_max + slack))
        return ControlInput(u=np.clip(u, 0.0, u_max), saturated=saturated)
