"""Command line entry point: tilthex <command> [options]"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from tilthex.errors import (
    AllocationFailure,
    ConfigError,
    EmptyTraceError,
    LutFormatError,
    SimulationFault,
)
from tilthex.harness.kpi import compute_kpis
from tilthex.harness.monte_carlo import (
    MonteCarloConfig,
    closed_loop_comparison,
    run_monte_carlo,
    run_weight_study,
    write_kpi_csv,
)
from tilthex.harness.scenario import ScenarioConfig, load_scenario
from tilthex.harness.simulation import build_hexarotor, simulate
from tilthex.harness.trace import read_trace, write_trace
from tilthex.hexarotor import Hexarotor
from tilthex.methods.force_polytope import lut_load, lut_save, section_at_height

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SIMULATION = 3
EXIT_INFEASIBLE = 4


class InfeasibleLimitExceeded(Exception):
    """More infeasible selections than --max-infeasible allows"""


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(
            f"Expected comma-separated numbers: { text }"
        ) from err


def _scenario(args: argparse.Namespace) -> ScenarioConfig:
    scenario = load_scenario(args.config) if args.config else ScenarioConfig()
    if getattr(args, "seed", None) is not None:
        scenario = replace(scenario, seed=args.seed)
    if getattr(args, "allocator", None):
        scenario = replace(scenario, allocator=args.allocator)
    return scenario


def _hexarotor(args: argparse.Namespace, scenario: ScenarioConfig) -> Hexarotor:
    lut = lut_load(args.lut) if getattr(args, "lut", None) else None
    return build_hexarotor(scenario, lut)


def _check_infeasible(count: int, limit: Optional[int]) -> None:
    if limit is not None and count > limit:
        raise InfeasibleLimitExceeded(
            f"{ count } infeasible selections, at most { limit } allowed"
        )


def cmd_build_lut(args: argparse.Namespace) -> None:
    """Build the polytope table and write it to disk"""
    scenario = _scenario(args)
    hexa = Hexarotor(scenario.platform)
    lut = hexa.build_lut(float(np.deg2rad(args.delta_deg)))
    lut_save(lut, args.out)


def cmd_run(args: argparse.Namespace) -> None:
    """Fly one scenario and write its trace"""
    scenario = _scenario(args)
    hexa = _hexarotor(args, scenario)
    trace = simulate(scenario, hexa=hexa)
    write_trace(trace, args.out, timing=args.timing)
    if args.kpi:
        report = compute_kpis(trace, start=scenario.kpi_start, hexa=hexa)
        write_kpi_csv(pd.DataFrame([report.to_dict()]), args.kpi, timing=args.timing)
    _check_infeasible(trace.infeasible_count, args.max_infeasible)


def cmd_mc(args: argparse.Namespace) -> None:
    """Monte-Carlo campaign over the nominal margins"""
    scenario = _scenario(args)
    config = MonteCarloConfig(
        runs=args.runs,
        master_seed=args.seed if args.seed is not None else 0,
        r_stars=tuple(args.rstar),
        include_baseline=args.baseline,
        workers=args.workers,
    )
    lut = lut_load(args.lut) if args.lut else None
    result = run_monte_carlo(scenario, config, lut)
    write_kpi_csv(result.aggregated, args.out, timing=args.timing)
    if args.per_run:
        write_kpi_csv(result.per_run, args.per_run, timing=args.timing)
    if result.failures:
        logger.warning("%d run(s) failed: %s", result.failures, result.failed_runs)
    infeasible = int(result.per_run["infeasible"].sum()) if len(result.per_run) else 0
    _check_infeasible(infeasible, args.max_infeasible)


def cmd_compare(args: argparse.Namespace) -> None:
    """Both allocators in closed loop on the same seed, plus replay timing"""
    scenario = _scenario(args)
    hexa = _hexarotor(args, scenario)
    frame, replay = closed_loop_comparison(scenario, hexa)
    write_kpi_csv(frame, args.out, timing=args.timing)
    print(pd.DataFrame([replay.to_dict()]).to_csv(index=False), end="")


def cmd_kpi(args: argparse.Namespace) -> None:
    """Indicators of a stored trace, printed as CSV"""
    scenario = _scenario(args)
    trace = read_trace(args.trace)
    start = args.start if args.start is not None else scenario.kpi_start
    report = compute_kpis(trace, scenario.platform, start=start)
    frame = pd.DataFrame([report.to_dict()])
    if not args.timing:
        frame = frame.drop(columns=["t_c_mean"])
    print(frame.to_csv(index=False), end="")


def cmd_section(args: argparse.Namespace) -> None:
    """Horizontal cut of one zero-moment polytope, for plotting"""
    scenario = _scenario(args)
    hexa = Hexarotor(scenario.platform)
    poly = hexa.build_polytope(float(np.deg2rad(args.alpha)))
    polygon = section_at_height(poly, args.z)
    pd.DataFrame(polygon, columns=["f_x", "f_y"]).to_csv(args.out, index=False)
    logger.info("Wrote %d section vertices to %s", len(polygon), args.out)


def cmd_weights(args: argparse.Namespace) -> None:
    """Weight-ratio study on the tabulated force profile"""
    scenario = (
        load_scenario(args.config) if args.config else ScenarioConfig.push_sequence()
    )
    result = run_weight_study(scenario, ratios=args.ratios, c2=args.c2)
    write_kpi_csv(result.kpis, args.out, timing=args.timing)
    if args.alphas:
        result.alphas.to_csv(args.alphas, index=False)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser of every command"""
    parser = argparse.ArgumentParser(
        prog="tilthex",
        description="Cant-angle selection and allocation for tilting hexarotors",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v info, -vv debug"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(
        name: str, handler: Callable, help_text: str
    ) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        sub.add_argument("--config", type=Path, help="scenario JSON")
        return sub

    sub = command("build-lut", cmd_build_lut, "build the polytope table")
    sub.add_argument("--delta-deg", type=float, default=1.0, help="grid step [deg]")
    sub.add_argument("--out", type=Path, required=True)

    sub = command("run", cmd_run, "fly one scenario and write its trace")
    sub.add_argument("--lut", type=Path, help="polytope table written by build-lut")
    sub.add_argument("--out", type=Path, required=True, help="trace CSV")
    sub.add_argument("--allocator", choices=("proposed", "baseline"))
    sub.add_argument("--seed", type=int)
    sub.add_argument("--kpi", type=Path, help="also write the indicators here")

    sub = command("mc", cmd_mc, "Monte-Carlo campaign")
    sub.add_argument("--runs", type=int, default=100)
    sub.add_argument("--seed", type=int, help="master seed")
    sub.add_argument(
        "--rstar", type=_float_list, default=[0.5, 1.0, 3.0, 5.0], help="e.g. 0.5,1,3,5"
    )
    sub.add_argument("--baseline", action="store_true", help="add the baseline")
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--lut", type=Path)
    sub.add_argument("--out", type=Path, required=True, help="aggregated KPI CSV")
    sub.add_argument("--per-run", type=Path, help="per-run KPI CSV")

    sub = command("compare", cmd_compare, "both allocators on the same seed")
    sub.add_argument("--lut", type=Path)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--out", type=Path, required=True)

    sub = command("kpi", cmd_kpi, "indicators of a stored trace")
    sub.add_argument("--trace", type=Path, required=True)
    sub.add_argument("--start", type=float, help="window start [s]")

    sub = command("section", cmd_section, "horizontal cut of a polytope")
    sub.add_argument("--alpha", type=float, required=True, help="cant angle [deg]")
    sub.add_argument("--z", type=float, required=True, help="vertical force [N]")
    sub.add_argument("--out", type=Path, required=True)

    sub = command("weights", cmd_weights, "weight-ratio study")
    sub.add_argument("--ratios", type=_float_list, default=[0.5, 1.0, 2.0])
    sub.add_argument("--c2", type=float, default=0.5)
    sub.add_argument("--out", type=Path, required=True, help="per-ratio KPI CSV")
    sub.add_argument("--alphas", type=Path, help="commanded angle per ratio CSV")

    for sub in commands.choices.values():
        sub.add_argument(
            "--timing", action="store_true", help="write wall-clock timing columns"
        )
        sub.add_argument(
            "--max-infeasible",
            type=int,
            help="exit with 4 above this many infeasible selections",
        )
    return parser


_EXIT_CODES: Dict[type, int] = {
    ConfigError: EXIT_CONFIG,
    LutFormatError: EXIT_CONFIG,
    EmptyTraceError: EXIT_CONFIG,
    SimulationFault: EXIT_SIMULATION,
    AllocationFailure: EXIT_SIMULATION,
    InfeasibleLimitExceeded: EXIT_INFEASIBLE,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command

    Returns:
        0 on success, 2 for configuration errors, 3 for simulation faults and
        4 when the infeasible-selection limit is exceeded
    """
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.handler(args)
    except tuple(_EXIT_CODES) as err:
        code = next(
            value for kind, value in _EXIT_CODES.items() if isinstance(err, kind)
        )
        logger.error("%s: %s", type(err).__name__, err)
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
