"""
Closed-loop scenarios around the Hexarotor: sensor and contact models, force
profiles, scripted references, the simulation loop, indicators, Monte-Carlo
campaigns and the tilthex command line.
"""

from tilthex.harness.kpi import KpiReport, aggregate_kpis, compute_kpis
from tilthex.harness.monte_carlo import (
    MonteCarloConfig,
    compare_allocators,
    run_monte_carlo,
    run_weight_study,
)
from tilthex.harness.scenario import ScenarioConfig, load_scenario
from tilthex.harness.simulation import simulate, wall_task
from tilthex.harness.trace import Trace, read_trace, write_trace
