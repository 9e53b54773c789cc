"""Per-control-step simulation trace and its CSV form"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import numpy as np
import pandas as pd

from tilthex.errors import ConfigError, EmptyTraceError

logger = logging.getLogger(__name__)

AXES = ("x", "y", "z")


def _vector_columns(name: str) -> List[str]:
    return [f"{ name }_{ axis }" for axis in AXES]


# column order of the CSV, documented in the README
TRACE_COLUMNS: List[str] = (
    ["t", "phase"]
    + _vector_columns("p")
    + ["q_w", "q_x", "q_y", "q_z"]
    + _vector_columns("e_p")
    + _vector_columns("e_R")
    + ["alpha", "alpha_cmd"]
    + [f"u_{ i }" for i in range(1, 7)]
    + _vector_columns("f_i")
    + _vector_columns("f_c")
    + _vector_columns("tau_c")
    + ["t_c", "saturated", "status", "candidates"]
)

U_COLUMNS = [f"u_{ i }" for i in range(1, 7)]


class Trace:
    """One row per control step of a closed-loop run

    Angles are in radians, spin inputs in Hz^2, forces in newtons and t_c in
    seconds. Vector quantities are split into one column per axis.

    Args:
        frame: data with the TRACE_COLUMNS, t_c may be missing
        infeasible_count: control steps at which the selector found no angle
    """

    def __init__(self, frame: pd.DataFrame, infeasible_count: int = 0):
        if "t_c" not in frame.columns:
            frame = frame.assign(t_c=np.nan)
        missing = [name for name in TRACE_COLUMNS if name not in frame.columns]
        if missing:
            raise ConfigError(f"Trace is missing columns { missing }")
        self._frame = frame[TRACE_COLUMNS].reset_index(drop=True)
        self.infeasible_count = infeasible_count

    @classmethod
    def from_rows(
        cls, rows: Iterable[Dict[str, Any]], infeasible_count: int = 0
    ) -> "Trace":
        """Build from the row mappings written by the simulation loop"""
        return cls(pd.DataFrame(list(rows), columns=TRACE_COLUMNS), infeasible_count)

    @property
    def frame(self) -> pd.DataFrame:
        """The underlying data"""
        return self._frame

    def __len__(self) -> int:
        return len(self._frame)

    @property
    def t(self) -> np.ndarray:  # pylint: disable=invalid-name
        """Control-step times [s]"""
        return self._frame["t"].to_numpy(dtype=float)

    def vectors(self, name: str) -> np.ndarray:
        """
        Nx3 array of a vector quantity such as "e_p" or "f_i"

        Examples:
            >>> trace = Trace.from_rows([{"t": 0.0, "e_p_x": 1.0}])
            >>> float(trace.vectors("e_p")[0, 0])
            1.0
        """
        return self._frame[_vector_columns(name)].to_numpy(dtype=float)

    @property
    def inputs(self) -> np.ndarray:
        """Nx6 squared spin rates [Hz^2]"""
        return self._frame[U_COLUMNS].to_numpy(dtype=float)

    @property
    def wrenches(self) -> np.ndarray:
        """Nx6 desired wrenches, force stacked on moment"""
        return np.hstack((self.vectors("f_c"), self.vectors("tau_c")))

    def window(self, start: float = 0.0, end: Optional[float] = None) -> "Trace":
        """Rows with start <= t, and t < end when given"""
        mask = self._frame["t"] >= start - 1e-9
        if end is not None:
            mask &= self._frame["t"] < end - 1e-9
        return Trace(self._frame[mask], self.infeasible_count)

    def phase(self, label: str) -> "Trace":
        """Rows recorded during the reference segments with the given label"""
        return Trace(
            self._frame[self._frame["phase"] == label], self.infeasible_count
        )


def write_trace(
    trace: Trace, path: Union[str, Path], timing: bool = False
) -> None:
    """
    Write a trace as CSV

    The t_c column holds wall-clock measurements and is only written when
    timing is requested; without it two runs of the same seed produce
    byte-identical files.

    Raises:
        EmptyTraceError: the trace has no rows
    """
    if len(trace) == 0:
        raise EmptyTraceError("Refusing to write a trace without control steps")
    frame = trace.frame if timing else trace.frame.drop(columns=["t_c"])
    frame.to_csv(path, index=False)
    logger.info("Wrote %d trace rows to %s", len(trace), path)


def read_trace(path: Union[str, Path]) -> Trace:
    """
    Read a CSV written by write_trace

    Raises:
        ConfigError: unreadable file or missing columns
        EmptyTraceError: no rows
    """
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError) as err:
        raise ConfigError(f"Cannot read trace { path }: { err }") from err
    except pd.errors.EmptyDataError as err:
        raise EmptyTraceError(f"Trace { path } is empty") from err
    if frame.empty:
        raise EmptyTraceError(f"Trace { path } has no rows")
    return Trace(frame)
