"""Interaction-force profiles interpolated through waypoints"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from tilthex.errors import ConfigError

PUSH_TIMES = (0.0, 20.0, 38.0, 60.0, 80.0)
PUSH_FORCES = (
    (0.0, 0.0, 0.0),
    (0.0, 0.0, 0.0),
    (0.0, -8.0, 10.0),
    (-10.0, 7.0, 2.0),
    (-6.0, -8.0, 0.0),
)


@dataclass(frozen=True, eq=False)
class ForceProfile:
    """Natural cubic spline per axis through force waypoints

    Outside the waypoint times the first and last values are held.

    Attributes:
        times: strictly increasing waypoint times [s]
        forces: one force 3-vector per waypoint, body frame [N]

    Examples:
        >>> profile = ForceProfile.push_sequence()
        >>> profile(38.0).tolist()
        [0.0, -8.0, 10.0]
        >>> profile(100.0).tolist()
        [-6.0, -8.0, 0.0]
    """

    times: np.ndarray
    forces: np.ndarray
    _spline: CubicSpline = field(init=False, repr=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        forces = np.asarray(self.forces, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise ConfigError("A force profile needs at least two waypoints")
        if forces.shape != (times.size, 3):
            raise ConfigError(
                f"Expected { times.size } force 3-vectors, got shape { forces.shape }"
            )
        if np.any(np.diff(times) <= 0):
            raise ConfigError("Waypoint times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "forces", forces)
        object.__setattr__(
            self, "_spline", CubicSpline(times, forces, axis=0, bc_type="natural")
        )

    def __call__(self, t: float) -> np.ndarray:
        return profile_eval(self, t)

    @classmethod
    def push_sequence(cls) -> "ForceProfile":
        """Waypoints of the weight-ratio study"""
        return cls(np.array(PUSH_TIMES), np.array(PUSH_FORCES))

    @classmethod
    def zero(cls, duration: float = 1.0) -> "ForceProfile":
        """No interaction at all"""
        return cls(np.array([0.0, max(duration, 1e-3)]), np.zeros((2, 3)))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ForceProfile":
        """Build from {"times": [...], "forces": [[fx, fy, fz], ...]}"""
        unknown = set(data) - {"times", "forces"}
        if unknown:
            raise ConfigError(f"Unknown profile keys: { sorted(unknown) }")
        try:
            return cls(np.array(data["times"]), np.array(data["forces"]))
        except KeyError as err:
            raise ConfigError(f"Force profile is missing { err }") from err

    def to_dict(self) -> Dict[str, Any]:
        """Inverse of from_dict"""
        return {"times": self.times.tolist(), "forces": self.forces.tolist()}


def profile_eval(profile: ForceProfile, t: float) -> np.ndarray:
    """
    Interaction force at time t

    Waypoints are returned exactly; before the first and after the last
    waypoint the end values are held.

    Examples:
        >>> profile = ForceProfile.push_sequence()
        >>> profile_eval(profile, 10.0).tolist()
        [0.0, 0.0, 0.0]
    """
    times = profile.times
    if t <= times[0]:
        return profile.forces[0].copy()
    if t >= times[-1]:
        return profile.forces[-1].copy()
    index = int(np.searchsorted(times, t))
    if times[index] == t:
        return profile.forces[index].copy()
    # pylint: disable=protected-access
    return np.asarray(profile._spline(t), dtype=float)


def sample_waypoints(
    rng: np.random.Generator,
    times: Sequence[float] = PUSH_TIMES,
    settle_time: float = 20.0,
    xy_bound: float = 15.0,
    z_max: float = 15.0,
) -> ForceProfile:
    """
    Random profile for one Monte-Carlo run

    Waypoints up to settle_time stay at zero; later ones draw x and y from
    U(-xy_bound, xy_bound) and z from U(0, z_max), in this order.

    Examples:
        >>> profile = sample_waypoints(np.random.Generator(np.random.Philox(1)))
        >>> profile.forces[:2].tolist()
        [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
        >>> bool(np.all(np.abs(profile.forces[2:, :2]) <= 15.0))
        True
    """
    times_arr = np.asarray(times, dtype=float)
    forces = np.zeros((times_arr.size, 3))
    active = times_arr > settle_time
    count = int(active.sum())
    forces[active, :2] = rng.uniform(-xy_bound, xy_bound, size=(count, 2))
    forces[active, 2] = rng.uniform(0.0, z_max, size=count)
    return ForceProfile(times_arr, forces)
