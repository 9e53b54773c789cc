"""Key performance indicators of a closed-loop run"""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Dict, Optional, Sequence

import numpy as np

from tilthex.errors import EmptyTraceError
from tilthex.harness.trace import Trace
from tilthex.hexarotor import Hexarotor
from tilthex.params import PlatformParams

# pylint: disable=invalid-name


@dataclass(frozen=True)
class KpiReport:
    """Tracking, actuation and timing indicators over a window of control steps

    Attributes:
        t_c_mean: mean selector plus allocation time [ms], NaN when not timed
        e_p_mean_norm: norm of the mean position error [m]
        e_p_rms: RMS of the position error norm [m]
        e_R_mean_norm: norm of the mean attitude error [rad]
        e_R_rms: RMS of the attitude error norm [rad]
        FEI_mean: mean force efficiency index
        MEI_mean: mean motor effort index
        u_rms: RMS of the input vector norm [Hz^2]
        N: number of control steps
    """

    t_c_mean: float
    e_p_mean_norm: float
    e_p_rms: float
    e_R_mean_norm: float
    e_R_rms: float
    FEI_mean: float
    MEI_mean: float
    u_rms: float
    N: int

    def to_dict(self) -> Dict[str, float]:
        """Plain mapping in field order"""
        return asdict(self)

    @property
    def finite(self) -> bool:
        """Whether every indicator apart from an untimed t_c is finite"""
        values = [getattr(self, name) for name in KPI_FIELDS if name != "t_c_mean"]
        return bool(np.all(np.isfinite(values)))


# pylint: enable=invalid-name

KPI_FIELDS = tuple(item.name for item in fields(KpiReport))


def _rms(norms: np.ndarray) -> float:
    return float(np.sqrt(np.mean(norms**2)))


def compute_kpis(
    trace: Trace,
    params: Optional[PlatformParams] = None,
    start: float = 0.0,
    hexa: Optional[Hexarotor] = None,
) -> KpiReport:
    """
    Indicators over the control steps with t >= start

    The force efficiency index compares the norm of the summed rotor thrusts
    at the recorded cant angle with 6 c_f omega_max^2; the motor effort index
    is the largest spin rate over omega_max.

    Args:
        trace: simulation trace
        params: platform the trace was flown with, case-study platform by default
        start: beginning of the evaluation window [s]
        hexa: platform model to reuse instead of building one from params

    Returns:
        The indicators, t_c_mean in milliseconds

    Raises:
        EmptyTraceError: no control step in the window

    Examples:
        >>> saturated = {f"u_{ i }": 11664.0 for i in range(1, 7)}
        >>> rows = [{"t": 0.01 * k, "alpha": 0.0, **saturated} for k in range(4)]
        >>> frame = Trace.from_rows(rows).frame.fillna(0.0)
        >>> report = compute_kpis(Trace(frame))
        >>> round(report.MEI_mean, 12), round(report.FEI_mean, 12), report.N
        (1.0, 1.0, 4)
    """
    window = trace.window(start) if start > 0 else trace
    if len(window) == 0:
        raise EmptyTraceError(f"No control steps at or after t = { start } s")
    if hexa is None:
        hexa = Hexarotor(params)
    params = hexa.params

    e_p = window.vectors("e_p")
    e_R = window.vectors("e_R")  # pylint: disable=invalid-name
    u = window.inputs
    alphas = window.frame["alpha"].to_numpy(dtype=float)

    thrust_sums = np.array(
        [hexa.rotor_thrusts(u_k, alpha).sum(axis=0) for u_k, alpha in zip(u, alphas)]
    )
    f_max = 6.0 * params.c_f * params.omega_max**2
    spin = np.sqrt(np.clip(u, 0.0, None))
    t_c = window.frame["t_c"].to_numpy(dtype=float)

    return KpiReport(
        t_c_mean=float(np.mean(t_c) * 1e3) if np.all(np.isfinite(t_c)) else np.nan,
        e_p_mean_norm=float(np.linalg.norm(e_p.mean(axis=0))),
        e_p_rms=_rms(np.linalg.norm(e_p, axis=1)),
        e_R_mean_norm=float(np.linalg.norm(e_R.mean(axis=0))),
        e_R_rms=_rms(np.linalg.norm(e_R, axis=1)),
        FEI_mean=float(np.mean(np.linalg.norm(thrust_sums, axis=1) / f_max)),
        MEI_mean=float(np.mean(spin.max(axis=1) / params.omega_max)),
        u_rms=_rms(np.linalg.norm(u, axis=1)),
        N=len(window),
    )


def aggregate_kpis(reports: Sequence[KpiReport]) -> KpiReport:
    """
    Per-run indicators averaged over runs, step counts summed

    A single report is returned unchanged.

    Raises:
        EmptyTraceError: no reports
    """
    if not reports:
        raise EmptyTraceError("No run produced indicators")
    if len(reports) == 1:
        return reports[0]
    values = {
        name: float(np.mean([getattr(report, name) for report in reports]))
        for name in KPI_FIELDS
        if name != "N"
    }
    return KpiReport(**values, N=int(sum(report.N for report in reports)))
