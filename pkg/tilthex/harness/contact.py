"""Spring-damper wall contact"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Dict, Tuple

import numpy as np

from tilthex.errors import ConfigError
from tilthex.methods.platform_model import ContactModel, RigidBodyState

E1 = np.array([1.0, 0.0, 0.0])


# pylint: disable=invalid-name
@dataclass(frozen=True)
class WallContact:
    """Vertical wall at x = x_w reacting as a spring-damper

    Attributes:
        x_w: x-coordinate of the wall plane, world frame [m]
        K_e: stiffness [N/m]
        K_d: damping [N s/m]
        tool_offset: distance of the tool tip from the CoM along body x [m]
    """

    x_w: float = 6.0
    K_e: float = 1e6
    K_d: float = 1e3
    tool_offset: float = 0.0

    def __post_init__(self):
        if self.K_e < 0 or self.K_d < 0:
            raise ConfigError(
                f"Wall stiffness and damping must be nonnegative, got { self }"
            )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WallContact":
        """Build from a scenario section, rejecting unknown keys"""
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"Unknown wall keys: { sorted(unknown) }")
        return cls(**{key: float(value) for key, value in data.items()})

    def to_dict(self) -> Dict[str, float]:
        """Plain mapping of the fields"""
        return asdict(self)


# pylint: enable=invalid-name


def wall_force(
    tip_pos: np.ndarray, tip_vel: np.ndarray, wall: WallContact
) -> np.ndarray:
    """
    Reaction of the wall on the tool tip, world frame

    The wall only pushes: a receding tip never gets pulled back.

    Args:
        tip_pos: tool tip position [m]
        tip_vel: tool tip velocity [m/s]
        wall: wall model

    Returns:
        Force along -x [N], zero without penetration

    Examples:
        >>> wall = WallContact()
        >>> wall_force(np.array([5.9, 0.0, 1.0]), np.zeros(3), wall).tolist()
        [0.0, 0.0, 0.0]
        >>> tip = np.array([6.00001, 0.0, 1.0])
        >>> [round(float(x), 9) for x in wall_force(tip, np.zeros(3), wall)]
        [-10.0, 0.0, 0.0]
        >>> round(float(wall_force(tip, np.array([0.001, 0.0, 0.0]), wall)[0]), 9)
        -11.0
    """
    penetration = float(tip_pos[0]) - wall.x_w
    if penetration <= 0:
        return np.zeros(3)
    push = wall.K_e * penetration + wall.K_d * float(tip_vel[0])
    return min(-push, 0.0) * E1 + 0.0


def tool_tip(state: RigidBodyState, wall: WallContact) -> Tuple[np.ndarray, np.ndarray]:
    """Position and velocity of the tool tip, world frame"""
    arm = wall.tool_offset * E1
    return state.p + state.R @ arm, state.v + state.R @ np.cross(state.omega, arm)


def contact_model(wall: WallContact) -> ContactModel:
    """Wall reaction as a function of the body state, applied at the CoM"""

    def reaction(state: RigidBodyState) -> np.ndarray:
        return wall_force(*tool_tip(state, wall), wall)

    return reaction
