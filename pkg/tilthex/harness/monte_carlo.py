"""Monte-Carlo campaigns, the weight-ratio study and the allocator comparison"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from tilthex.errors import (
    AllocationFailure,
    ConfigError,
    EmptyTraceError,
    SimulationFault,
)
from tilthex.harness.kpi import KPI_FIELDS, KpiReport, aggregate_kpis, compute_kpis
from tilthex.harness.profiles import PUSH_TIMES, ForceProfile, sample_waypoints
from tilthex.harness.scenario import ScenarioConfig
from tilthex.harness.simulation import build_hexarotor, simulate
from tilthex.harness.trace import Trace
from tilthex.hexarotor import Hexarotor
from tilthex.methods.baseline_allocator import BaselineConfig
from tilthex.methods.cant_selector import SelectorConfig
from tilthex.methods.force_polytope import PolytopeLUT
from tilthex.methods.platform_model import BodyWrench

logger = logging.getLogger(__name__)

BASELINE_LABEL = "baseline"


@dataclass(frozen=True)
class MonteCarloConfig:
    """Size, seeding and sampling ranges of a campaign

    Attributes:
        runs: runs per configuration
        master_seed: seed every per-run stream is derived from
        r_stars: nominal margins [N], one configuration each
        include_baseline: add a configuration flown with the baseline allocator
        workers: worker processes, 1 runs everything in this process
        waypoint_times: times of the sampled force waypoints [s]
        settle_time: waypoints up to this time stay at zero [s]
        xy_bound: bound of the horizontal waypoint components [N]
        z_max: upper bound of the vertical waypoint component [N]
    """

    runs: int = 100
    master_seed: int = 0
    r_stars: Tuple[float, ...] = (0.5, 1.0, 3.0, 5.0)
    include_baseline: bool = False
    workers: int = 1
    waypoint_times: Tuple[float, ...] = PUSH_TIMES
    settle_time: float = 20.0
    xy_bound: float = 15.0
    z_max: float = 15.0

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigError(f"A campaign needs at least one run, got { self.runs }")
        if not self.r_stars and not self.include_baseline:
            raise ConfigError("A campaign needs at least one configuration")
        if any(r_star < 0 for r_star in self.r_stars):
            raise ConfigError(f"Margins must be nonnegative, got { self.r_stars }")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got { self.workers }")

    @property
    def labels(self) -> List[str]:
        """Configuration labels in output order"""
        labels = [f"r_star={ r_star:g}" for r_star in self.r_stars]
        if self.include_baseline:
            labels.append(BASELINE_LABEL)
        return labels


def run_seeds(master_seed: int, index: int) -> Tuple[np.random.Generator, int]:
    """
    Waypoint generator and simulation seed of one run

    Both derive from the master seed and the run index only, so every
    configuration of a campaign sees the same forces and sensor noise.

    Examples:
        >>> _, first = run_seeds(42, 0)
        >>> _, again = run_seeds(42, 0)
        >>> first == again, first == run_seeds(42, 1)[1]
        (True, False)
    """
    waypoint_seq = np.random.SeedSequence(master_seed, spawn_key=(index, 0))
    sim_seq = np.random.SeedSequence(master_seed, spawn_key=(index, 1))
    rng = np.random.Generator(np.random.Philox(waypoint_seq))
    return rng, int(sim_seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


@dataclass(frozen=True)
class _RunTask:
    label: str
    index: int
    scenario: ScenarioConfig
    lut: Optional[PolytopeLUT]


@dataclass
class _RunOutcome:
    label: str
    index: int
    seed: int
    report: Optional[KpiReport]
    infeasible: int = 0
    error: Optional[str] = None


def _run_one(task: _RunTask) -> _RunOutcome:
    """Fly one run, module level so that worker processes can import it"""
    scenario = task.scenario
    try:
        hexa = build_hexarotor(scenario, task.lut)
        trace = simulate(scenario, hexa=hexa)
        report = compute_kpis(trace, start=scenario.kpi_start, hexa=hexa)
    except (SimulationFault, AllocationFailure, EmptyTraceError) as err:
        logger.error("Run %d of %s failed: %s", task.index, task.label, err)
        return _RunOutcome(task.label, task.index, scenario.seed, None, error=str(err))
    return _RunOutcome(
        task.label, task.index, scenario.seed, report, trace.infeasible_count
    )


def _campaign_tasks(
    scenario: ScenarioConfig, config: MonteCarloConfig, lut: Optional[PolytopeLUT]
) -> List[_RunTask]:
    tasks = []
    for index in range(config.runs):
        rng, seed = run_seeds(config.master_seed, index)
        profile = sample_waypoints(
            rng,
            config.waypoint_times,
            settle_time=config.settle_time,
            xy_bound=config.xy_bound,
            z_max=config.z_max,
        )
        base = replace(scenario, profile=profile, wall=None, seed=seed)
        for label, r_star in zip(config.labels, config.r_stars):
            run = replace(
                base,
                allocator="proposed",
                selector=replace(scenario.selector, r_star=float(r_star)),
            )
            tasks.append(_RunTask(label, index, run, lut))
        if config.include_baseline:
            tasks.append(
                _RunTask(
                    BASELINE_LABEL, index, replace(base, allocator="baseline"), lut
                )
            )
    return tasks


@dataclass
class MonteCarloResult:
    """Aggregated indicators per configuration, per-run indicators and failures"""

    aggregated: pd.DataFrame
    per_run: pd.DataFrame
    failures: int = 0
    failed_runs: List[Tuple[str, int]] = field(default_factory=list)


def run_monte_carlo(
    scenario: ScenarioConfig,
    config: MonteCarloConfig,
    lut: Optional[PolytopeLUT] = None,
) -> MonteCarloResult:
    """
    Fly every configuration on the same randomly drawn force profiles

    Indicators are computed per run and then averaged; failed runs are
    logged, counted and left out of the averages. Results are ordered by
    configuration and run index whatever order the workers finish in.

    Args:
        scenario: template every run is derived from
        config: campaign size, seeding and configurations
        lut: polytope table shared by all runs, built once when omitted

    Returns:
        One aggregated row per configuration and one row per successful run

    Raises:
        EmptyTraceError: a configuration has no successful run
    """
    if lut is None and config.r_stars:
        lut = build_hexarotor(scenario).lut
    tasks = _campaign_tasks(scenario, config, lut)
    logger.info(
        "Monte-Carlo campaign: %d runs x %d configurations on %d worker(s)",
        config.runs,
        len(config.labels),
        config.workers,
    )

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_run_one, tasks))
    else:
        outcomes = []
        for done, task in enumerate(tasks, start=1):
            outcomes.append(_run_one(task))
            logger.info("Finished run %d of %d", done, len(tasks))

    order = {label: k for k, label in enumerate(config.labels)}
    outcomes.sort(key=lambda out: (order[out.label], out.index))
    r_star_of = dict(zip(config.labels, config.r_stars))

    per_run_rows = []
    aggregated_rows = []
    failed = [(out.label, out.index) for out in outcomes if out.report is None]
    for label in config.labels:
        done = [out for out in outcomes if out.label == label and out.report]
        for out in done:
            assert out.report is not None
            per_run_rows.append(
                {
                    "configuration": label,
                    "run": out.index,
                    "seed": out.seed,
                    "infeasible": out.infeasible,
                    **out.report.to_dict(),
                }
            )
        aggregate = aggregate_kpis([out.report for out in done if out.report])
        aggregated_rows.append(
            {
                "configuration": label,
                "r_star": r_star_of.get(label, np.nan),
                "runs": len(done),
                "failures": sum(1 for name, _ in failed if name == label),
                **aggregate.to_dict(),
            }
        )

    if failed:
        logger.warning("%d run(s) failed and were left out", len(failed))
    return MonteCarloResult(
        aggregated=pd.DataFrame(aggregated_rows),
        per_run=pd.DataFrame(per_run_rows),
        failures=len(failed),
        failed_runs=failed,
    )


def write_kpi_csv(
    frame: pd.DataFrame, path: Union[str, Path], timing: bool = False
) -> None:
    """
    Write an indicator table as CSV

    t_c_mean is a wall-clock measurement and only written with timing, so that
    the file of a seeded campaign is byte-identical across reruns.
    """
    out = frame if timing else frame.drop(columns=["t_c_mean"], errors="ignore")
    out.to_csv(path, index=False)
    logger.info("Wrote %d indicator rows to %s", len(out), path)


@dataclass
class WeightStudyResult:
    """Selected angle over time per weight ratio, and per-ratio indicators"""

    alphas: pd.DataFrame
    kpis: pd.DataFrame


def count_jumps(alpha_cmd: np.ndarray, threshold: float) -> int:
    """
    Consecutive commanded angles further apart than threshold [rad]

    Examples:
        >>> count_jumps(np.deg2rad([4.0, 4.0, -4.0, -3.0, 20.0]), np.deg2rad(5.0))
        2
    """
    return int(np.sum(np.abs(np.diff(np.asarray(alpha_cmd, dtype=float))) > threshold))


def run_weight_study(
    scenario: Optional[ScenarioConfig] = None,
    ratios: Sequence[float] = (0.5, 1.0, 2.0),
    c2: float = 0.5,
    jump_threshold: float = float(np.deg2rad(5.0)),
    hexa: Optional[Hexarotor] = None,
) -> WeightStudyResult:
    """
    Fly the tabulated force profile once per ratio c1 / c2

    A larger ratio pulls the selected angle towards the untilted configuration,
    a smaller one keeps it close to the previous angle and avoids jumps.

    Args:
        scenario: template, the tabulated force profile scenario by default
        ratios: values of c1 / c2
        c2: weight on the change from the previous angle
        jump_threshold: change of the commanded angle counted as a jump [rad]
        hexa: platform model shared by the runs

    Returns:
        alpha_cmd per ratio over time, and indicators plus jump count per ratio
    """
    if scenario is None:
        scenario = ScenarioConfig.push_sequence()
    if scenario.profile is None:
        scenario = replace(scenario, profile=ForceProfile.push_sequence(), wall=None)
    hexa = hexa if hexa is not None else build_hexarotor(scenario)

    columns: Dict[str, np.ndarray] = {}
    rows = []
    for ratio in ratios:
        if ratio < 0:
            raise ConfigError(f"Weight ratios must be nonnegative, got { ratio }")
        selector = replace(scenario.selector, c1=float(ratio) * c2, c2=c2)
        trace = simulate(replace(scenario, selector=selector), hexa=hexa)
        alpha_cmd = trace.frame["alpha_cmd"].to_numpy(dtype=float)
        columns.setdefault("t", trace.t)
        columns[f"alpha_cmd_ratio={ ratio:g}"] = alpha_cmd
        report = compute_kpis(trace, start=scenario.kpi_start, hexa=hexa)
        rows.append(
            {
                "ratio": float(ratio),
                "c1": selector.c1,
                "c2": selector.c2,
                "jumps": count_jumps(alpha_cmd, jump_threshold),
                "infeasible": trace.infeasible_count,
                **report.to_dict(),
            }
        )
    return WeightStudyResult(alphas=pd.DataFrame(columns), kpis=pd.DataFrame(rows))


@dataclass(frozen=True)
class AllocatorComparison:
    """Mean time per control step of both allocators on one wrench stream [ms]"""

    proposed_ms: float
    baseline_ms: float
    steps: int

    @property
    def ratio(self) -> float:
        """Proposed over baseline mean time"""
        return self.proposed_ms / self.baseline_ms

    def to_dict(self) -> Dict[str, float]:
        """Plain mapping including the ratio"""
        return {
            "proposed_ms": self.proposed_ms,
            "baseline_ms": self.baseline_ms,
            "ratio": self.ratio,
            "steps": self.steps,
        }


def compare_allocators(
    trace: Trace,
    hexa: Hexarotor,
    selector: Optional[SelectorConfig] = None,
    baseline: Optional[BaselineConfig] = None,
    steps: Optional[int] = None,
) -> AllocatorComparison:
    """
    Replay a recorded desired-wrench stream through both allocators

    Each allocator sees the same wrench and the same recorded cant angle at
    every step; only the allocation calls are timed.

    Args:
        trace: trace providing the wrench stream and the cant angles
        hexa: platform model, its LUT is built before timing starts
        selector: selector settings, defaults to SelectorConfig()
        baseline: baseline settings, weights default to the selector weights
        steps: replay only the first steps rows

    Raises:
        EmptyTraceError: nothing to replay
    """
    selector = selector if selector is not None else SelectorConfig()
    if baseline is None:
        baseline = BaselineConfig(
            alpha_grid_step=hexa.lut_step, c1=selector.c1, c2=selector.c2
        )
    wrenches = trace.wrenches[:steps]
    alphas = trace.frame["alpha"].to_numpy(dtype=float)[:steps]
    if len(wrenches) == 0:
        raise EmptyTraceError("No wrenches to replay")

    lut = hexa.lut
    hexa.baseline_allocate(BodyWrench.from_vector(wrenches[0]), alphas[0], baseline)
    proposed = np.empty(len(wrenches))
    reference = np.empty(len(wrenches))
    alpha_prev = 0.0
    for k, (vector, alpha) in enumerate(zip(wrenches, alphas)):
        wrench = BodyWrench.from_vector(vector)
        start = time.perf_counter()
        outcome = hexa.select(wrench.f, alpha_prev, selector, lut)
        hexa.allocate(wrench, alpha, strict=False)
        proposed[k] = time.perf_counter() - start
        alpha_prev = outcome.alpha_star

        start = time.perf_counter()
        hexa.baseline_allocate(wrench, alpha, baseline)
        reference[k] = time.perf_counter() - start

    comparison = AllocatorComparison(
        proposed_ms=float(proposed.mean() * 1e3),
        baseline_ms=float(reference.mean() * 1e3),
        steps=len(wrenches),
    )
    logger.info(
        "Proposed %.4f ms, baseline %.4f ms per step (ratio %.3f)",
        comparison.proposed_ms,
        comparison.baseline_ms,
        comparison.ratio,
    )
    return comparison


def closed_loop_comparison(
    scenario: ScenarioConfig, hexa: Optional[Hexarotor] = None
) -> Tuple[pd.DataFrame, AllocatorComparison]:
    """
    Fly one scenario with both allocators on the same seed

    Returns:
        One indicator row per allocator, and the replay timing on the wrench
        stream of the proposed run
    """
    hexa = hexa if hexa is not None else build_hexarotor(scenario)
    rows = []
    traces = {}
    for allocator in ("proposed", BASELINE_LABEL):
        trace = simulate(replace(scenario, allocator=allocator), hexa=hexa)
        traces[allocator] = trace
        report = compute_kpis(trace, start=scenario.kpi_start, hexa=hexa)
        rows.append(
            {
                "configuration": allocator,
                "infeasible": trace.infeasible_count,
                **report.to_dict(),
            }
        )
    replay = compare_allocators(traces["proposed"], hexa, scenario.selector)
    columns = ["configuration", "infeasible", *KPI_FIELDS]
    return pd.DataFrame(rows, columns=columns), replay
