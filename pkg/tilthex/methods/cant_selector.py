"""Online cant-angle selection over the polytope look-up table"""
from __future__ import annotations

import enum
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np

from tilthex.errors import ConfigError, ContractViolation
from tilthex.methods.base import Base
from tilthex.methods.force_polytope import BOUNDARY_TOL, PolytopeLUT, contains_ball

logger = logging.getLogger(__name__)

# costs and angles closer than this are treated as ties
TIE_TOL = 1e-12


class SelectionStatus(str, enum.Enum):
    """Which phase produced the selected angle"""

    NOMINAL = "nominal"
    RELAXED = "relaxed"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SelectorConfig:
    """Margins and cost weights of the selector

    Attributes:
        r_star: nominal robustness margin [N]
        c_r: relaxation factor applied to r_star in the second phase
        c1: weight on the distance from the untilted configuration
        c2: weight on the change from the previous angle

    Examples:
        >>> SelectorConfig(c_r=0.0)
        Traceback (most recent call last):
        ...
        tilthex.errors.ConfigError: c_r must lie in (0, 1], got 0.0
    """

    r_star: float = 1.0
    c_r: float = 1.0 / 3.0
    c1: float = 0.5
    c2: float = 0.5

    def __post_init__(self):
        if self.r_star < 0:
            raise ConfigError(f"r_star must be nonnegative, got { self.r_star }")
        if not 0 < self.c_r <= 1:
            raise ConfigError(f"c_r must lie in (0, 1], got { self.c_r }")
        if self.c1 < 0 or self.c2 < 0:
            raise ConfigError(
                f"Cost weights must be nonnegative, got c1={ self.c1 }, c2={ self.c2 }"
            )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SelectorConfig":
        """Build from a scenario section, rejecting unknown keys"""
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"Unknown selector keys: { sorted(unknown) }")
        return cls(**{key: float(value) for key, value in data.items()})

    def to_dict(self) -> Dict[str, float]:
        """Plain mapping of the fields"""
        return asdict(self)


@dataclass(frozen=True)
class SelectorOutcome:
    """Result of one selection

    An infeasible outcome keeps the previous angle.
    """

    alpha_star: float
    status: SelectionStatus
    candidate_count: int


def cost(alpha_next: float, alpha_cur: float, c1: float, c2: float) -> float:
    """
    Penalty of moving to alpha_next from alpha_cur, angles in radians

    Examples:
        >>> round(cost(np.deg2rad(5), 0.0, 0.5, 0.5), 4)
        0.0873
        >>> round(cost(np.deg2rad(-10), np.deg2rad(20), 1.0, 2.0), 4)
        1.2217
    """
    return float(c1 * abs(alpha_next) + c2 * abs(alpha_next - alpha_cur))


class CantSelector(Base):
    """Responsible for picking the cant angle of the next control step"""

    def candidate_set(
        self, f_star: np.ndarray, r: float, lut: Optional[PolytopeLUT] = None
    ) -> np.ndarray:
        """
        Grid angles whose polytope holds the ball of radius r around f_star

        Args:
            f_star: desired force, body frame [N]
            r: ball radius [N]
            lut: table to scan, defaults to the instance's table

        Returns:
            Candidate angles [rad] in ascending order

        Raises:
            ContractViolation: negative radius

        Examples:
            >>> hover = np.array([0.0, 0.0, 34.335])
            >>> degrees = np.rad2deg(hexa.candidate_set(hover, 1.0))
            >>> bool(np.all(np.abs(degrees) > 3.5))
            True
            >>> bool(np.any(np.isclose(degrees, 4.0)))
            True
            >>> hexa.candidate_set(np.array([0.0, 0.0, 150.0]), 0.0).size
            0
        """
        if r < 0:
            raise ContractViolation(f"Radius must be nonnegative, got { r }")
        table = self.lut if lut is None else lut
        f_star = np.asarray(f_star, dtype=float)
        # degenerate entries report -inf and never pass a positive radius
        mask = table.margins(f_star) >= r - BOUNDARY_TOL
        if r == 0:
            for k in np.flatnonzero(table.degenerate_mask):
                mask[k] = contains_ball(table.entries[k], f_star, 0.0)
        return table.alphas[mask]

    def select(
        self,
        f_star: np.ndarray,
        alpha_prev: float,
        config: Optional[SelectorConfig] = None,
        lut: Optional[PolytopeLUT] = None,
    ) -> SelectorOutcome:
        """
        Cost-minimizing admissible cant angle for a desired force

        The nominal margin is tried first, then once more with the relaxed
        margin c_r * r_star. If both candidate sets are empty the previous
        angle is kept.

        Args:
            f_star: desired force, body frame [N]
            alpha_prev: angle selected at the previous control step [rad]
            config: margins and weights, defaults to SelectorConfig()
            lut: table to scan, defaults to the instance's table

        Returns:
            Selected angle, the phase it came from and the candidate count

        Examples:
            >>> out = hexa.select(np.array([0.0, 0.0, 34.335]), 0.0)
            >>> round(float(np.rad2deg(out.alpha_star)), 6), out.status.value
            (4.0, 'nominal')
            >>> out = hexa.select(np.array([0.0, 0.0, 150.0]), np.deg2rad(25))
            >>> round(float(np.rad2deg(out.alpha_star)), 6), out.status.value
            (25.0, 'infeasible')
        """
        config = config if config is not None else SelectorConfig()
        status = SelectionStatus.NOMINAL
        candidates = self.candidate_set(f_star, config.r_star, lut)
        if candidates.size == 0:
            status = SelectionStatus.RELAXED
            candidates = self.candidate_set(f_star, config.c_r * config.r_star, lut)
            logger.debug(
                "No angle holds a %.3f N margin around %s, relaxing",
                config.r_star,
                f_star,
            )
        if candidates.size == 0:
            return SelectorOutcome(
                alpha_star=float(alpha_prev),
                status=SelectionStatus.INFEASIBLE,
                candidate_count=0,
            )

        return SelectorOutcome(
            alpha_star=self._argmin_cost(candidates, alpha_prev, config),
            status=status,
            candidate_count=int(candidates.size),
        )

    @staticmethod
    def _argmin_cost(
        candidates: np.ndarray, alpha_prev: float, config: SelectorConfig
    ) -> float:
        """Cheapest candidate; ties go to the smaller |alpha|, then to alpha >= 0"""
        costs = config.c1 * np.abs(candidates) + config.c2 * np.abs(
            candidates - alpha_prev
        )
        tied = candidates[costs <= costs.min() + TIE_TOL]
        magnitudes = np.abs(tied)
        closest = tied[magnitudes <= magnitudes.min() + TIE_TOL]
        return float(closest.max())
