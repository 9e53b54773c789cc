"""Scripted pose references built from minimum-jerk segments"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from tilthex.errors import ConfigError
from tilthex.harness.contact import WallContact
from tilthex.methods.pose_controller import ControllerRefs

HOVER_POSITION = (0.0, 0.0, 1.0)


def min_jerk(
    start: np.ndarray, end: np.ndarray, duration: float, elapsed: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Position, velocity and acceleration along a rest-to-rest minimum-jerk move

    Examples:
        >>> p, v, a = min_jerk(np.zeros(3), np.array([0.0, 0.0, 1.0]), 5.0, 2.5)
        >>> float(p[2]), round(float(v[2]), 6), round(float(a[2]), 6) + 0.0
        (0.5, 0.375, 0.0)
    """
    delta = np.asarray(end, dtype=float) - np.asarray(start, dtype=float)
    if duration <= 0 or elapsed >= duration:
        return np.array(end, dtype=float), np.zeros(3), np.zeros(3)
    s = max(elapsed, 0.0) / duration
    shape = s**3 * (10.0 - 15.0 * s + 6.0 * s**2)
    rate = 30.0 * s**2 * (1.0 - s) ** 2 / duration
    curvature = (60.0 * s - 180.0 * s**2 + 120.0 * s**3) / duration**2
    return start + shape * delta, rate * delta, curvature * delta


@dataclass(frozen=True, eq=False)
class Segment:
    """One labelled minimum-jerk move, level attitude throughout"""

    label: str
    t0: float
    duration: float
    start: np.ndarray
    end: np.ndarray

    @property
    def t1(self) -> float:
        """End time [s]"""
        return self.t0 + self.duration

    def refs(self, t: float) -> ControllerRefs:
        """References at absolute time t"""
        p_r, v_r, a_r = min_jerk(self.start, self.end, self.duration, t - self.t0)
        return ControllerRefs(p_r=p_r, v_r=v_r, a_r=a_r)


class ReferenceScript:
    """Back-to-back segments; the last end point is held afterwards

    Examples:
        >>> script = takeoff_script((0.0, 0.0, 0.0), HOVER_POSITION, 5.0)
        >>> script(100.0).p_r.tolist(), script.phase(1.0)
        ([0.0, 0.0, 1.0], 'takeoff')
    """

    def __init__(self, segments: Sequence[Segment]):
        if not segments:
            raise ConfigError("A reference script needs at least one segment")
        for before, after in zip(segments, segments[1:]):
            if abs(before.t1 - after.t0) > 1e-9:
                raise ConfigError(
                    f"Segment '{ after.label }' starts at { after.t0 }, "
                    f"expected { before.t1 }"
                )
        self._segments = list(segments)
        self._ends = np.array([seg.t1 for seg in self._segments])

    @property
    def segments(self) -> List[Segment]:
        """The segments in time order"""
        return list(self._segments)

    @property
    def duration(self) -> float:
        """End time of the last segment [s]"""
        return float(self._ends[-1])

    def _segment_at(self, t: float) -> Segment:
        index = int(np.searchsorted(self._ends, t, side="right"))
        return self._segments[min(index, len(self._segments) - 1)]

    def __call__(self, t: float) -> ControllerRefs:
        return self._segment_at(t).refs(t)

    def phase(self, t: float) -> str:
        """Label of the segment active at t, 'hold' after the script"""
        if t >= self.duration:
            return "hold"
        return self._segment_at(t).label

    def windows(self, label: str) -> List[Tuple[float, float]]:
        """Start and end times of every segment with the given label"""
        return [(seg.t0, seg.t1) for seg in self._segments if seg.label == label]


def takeoff_script(
    start: Sequence[float], hover: Sequence[float], duration: float
) -> ReferenceScript:
    """Rise from rest at start to the hover position"""
    start_arr = np.asarray(start, dtype=float)
    hover_arr = np.asarray(hover, dtype=float)
    return ReferenceScript([Segment("takeoff", 0.0, duration, start_arr, hover_arr)])


# pylint: disable=too-many-arguments,too-many-locals
def wall_script(
    wall: WallContact,
    start: Sequence[float] = (0.0, 0.0, 0.0),
    hover: Sequence[float] = HOVER_POSITION,
    contact_heights: Sequence[float] = (1.0, 2.0, 3.0),
    takeoff_time: float = 5.0,
    settle_time: float = 5.0,
    transfer_time: float = 8.0,
    approach_time: float = 3.0,
    dwell_time: float = 5.0,
    penetration: float = 0.02,
    standoff: float = 0.5,
) -> ReferenceScript:
    """
    Take off, then touch the wall at every contact height in turn

    Each contact moves to a standoff point in front of the wall, approaches a
    target penetration beyond the wall surface, dwells, and retreats to the
    standoff point. Positions are CoM references; the tool offset is taken out.

    Examples:
        >>> script = wall_script(WallContact())
        >>> len(script.windows("contact")), script.windows("contact")[0]
        (3, (21.0, 26.0))
        >>> [round(float(x), 9) for x in script(23.0).p_r]
        [6.02, 0.0, 1.0]
    """
    x_touch = wall.x_w + penetration - wall.tool_offset
    x_standoff = wall.x_w - standoff - wall.tool_offset
    current = np.asarray(hover, dtype=float)
    segments = [
        Segment("takeoff", 0.0, takeoff_time, np.asarray(start, dtype=float), current),
        Segment("settle", takeoff_time, settle_time, current, current),
    ]

    def push(label: str, duration: float, target: np.ndarray) -> None:
        nonlocal current
        segments.append(Segment(label, segments[-1].t1, duration, current, target))
        current = target

    for height in contact_heights:
        ready = np.array([x_standoff, 0.0, height])
        push("transfer", transfer_time, ready)
        push("approach", approach_time, np.array([x_touch, 0.0, height]))
        push("contact", dwell_time, current)
        push("retreat", approach_time, ready)
    return ReferenceScript(segments)


# pylint: enable=too-many-arguments,too-many-locals
