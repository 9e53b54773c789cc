"""Closed-loop simulation: physics at the physics rate, control at the control rate"""
from __future__ import annotations

import logging
import time
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from tilthex.errors import ConfigError, EmptyTraceError, StabilityAbort
from tilthex.geometry import to_quaternion
from tilthex.harness.contact import contact_model, tool_tip, wall_force
from tilthex.harness.references import ReferenceScript, takeoff_script, wall_script
from tilthex.harness.scenario import ScenarioConfig
from tilthex.harness.sensors import MocapSensor, force_measure
from tilthex.harness.trace import Trace
from tilthex.hexarotor import Hexarotor
from tilthex.methods.baseline_allocator import BaselineConfig
from tilthex.methods.force_polytope import PolytopeLUT
from tilthex.methods.platform_model import (
    ActuatorState,
    BodyWrench,
    DisturbanceWrench,
    RigidBodyState,
)
from tilthex.methods.pose_controller import ControllerState, PoseErrors

logger = logging.getLogger(__name__)

# position error that stops a scripted contact task [m]
ABORT_THRESHOLD = 1.0

# residual of the baseline solve reported as saturation, relative to the wrench
BASELINE_SATURATION_TOL = 1e-6

InteractionForce = Callable[[RigidBodyState, float], np.ndarray]


def build_hexarotor(
    scenario: ScenarioConfig, lut: Optional[PolytopeLUT] = None
) -> Hexarotor:
    """Platform of a scenario, optionally with a LUT loaded from disk"""
    hexa = Hexarotor(scenario.platform, lut_step=scenario.lut_step)
    if lut is not None:
        hexa.lut = lut
    return hexa


def reference_script(scenario: ScenarioConfig) -> ReferenceScript:
    """Wall-contact script when a wall is configured, take-off and hover otherwise"""
    takeoff = scenario.takeoff
    if scenario.wall is not None:
        return wall_script(
            scenario.wall,
            start=takeoff.start,
            hover=takeoff.hover,
            takeoff_time=takeoff.duration,
        )
    return takeoff_script(takeoff.start, takeoff.hover, takeoff.duration)


def interaction_force(scenario: ScenarioConfig) -> Optional[InteractionForce]:
    """
    True interaction force in the body frame as a function of state and time

    Returns None when the scenario has no interaction at all.
    """
    profile, wall = scenario.profile, scenario.wall
    if profile is not None:
        return lambda state, t: profile(t)
    if wall is not None:
        return lambda state, t: state.R.T @ wall_force(*tool_tip(state, wall), wall)
    return None


def _duration(scenario: ScenarioConfig, script: ReferenceScript) -> float:
    # a wall task ends with its script
    if scenario.wall is not None:
        return min(scenario.duration, script.duration)
    return scenario.duration


# pylint: disable=too-many-locals,too-many-statements
def simulate(
    scenario: ScenarioConfig,
    hexa: Optional[Hexarotor] = None,
    abort_threshold: Optional[float] = None,
    baseline: Optional[BaselineConfig] = None,
) -> Trace:
    """
    Fly a scenario in closed loop and record one trace row per control step

    Every control step takes a motion-capture and a force-sensor reading,
    computes the desired wrench, then times the cant-angle selection plus the
    allocation (or the joint baseline allocation). The commanded inputs are
    held while the physics advances by the control period.

    Tracking errors in the trace are those of the true state.

    Args:
        scenario: complete run description, including the seed
        hexa: platform model to reuse, it must match scenario.platform
        abort_threshold:
            position error [m] stopping the run with StabilityAbort,
            ABORT_THRESHOLD for wall tasks and disabled otherwise by default
        baseline: settings of the baseline allocator, weights default to the
            selector weights of the scenario

    Returns:
        The trace, with the number of infeasible selections attached

    Raises:
        EmptyTraceError: the scenario has no control step
        IntegrationFault: the dynamics diverged
        StabilityAbort: position error above abort_threshold
    """
    script = reference_script(scenario)
    duration = _duration(scenario, script)
    n_steps = int(np.floor(duration * scenario.control_rate + 1e-9))
    if n_steps <= 0:
        raise EmptyTraceError(f"Scenario of { duration } s has no control step")
    if abort_threshold is None and scenario.wall is not None:
        abort_threshold = ABORT_THRESHOLD

    hexa = hexa if hexa is not None else build_hexarotor(scenario)
    if baseline is None:
        baseline = BaselineConfig(
            alpha_grid_step=scenario.lut_step,
            c1=scenario.selector.c1,
            c2=scenario.selector.c2,
        )
    rng = np.random.Generator(np.random.Philox(scenario.seed))
    mocap = MocapSensor(scenario.sensors, scenario.physics_dt, rng)
    contact = contact_model(scenario.wall) if scenario.wall is not None else None
    f_interaction = interaction_force(scenario)

    state = RigidBodyState(p=scenario.takeoff.start.copy())
    actuators = ActuatorState()
    ctrl_state = ControllerState()
    mocap.reset(state)
    alpha_prev = 0.0
    infeasible = 0
    rows = []

    logger.info(
        "Simulating %.1f s with the %s allocator, seed %d",
        duration,
        scenario.allocator,
        scenario.seed,
    )
    for step in range(n_steps):
        t = step * scenario.control_dt
        refs = script(t)
        est = mocap.mocap_measure(t)
        f_i_true = (
            f_interaction(state, t) if f_interaction is not None else np.zeros(3)
        )
        f_i_meas = force_measure(f_i_true, scenario.sensors, rng)
        wrench, ctrl_state, _ = hexa.control_step(
            est,
            refs,
            ctrl_state,
            scenario.gains,
            actuators.alpha,
            f_i_meas,
            scenario.control_dt,
            scenario.controller,
        )

        command, t_c = _allocate(
            hexa, scenario, wrench, actuators.alpha, alpha_prev, baseline
        )
        if command["status"] == "infeasible":
            infeasible += 1
            logger.warning(
                "No admissible cant angle at t = %.2f s for f* = %s N",
                t,
                np.round(wrench.f, 3).tolist(),
            )
        alpha_prev = command["alpha_cmd"]

        errors = hexa.pose_errors(state, refs)
        error_norm = float(np.linalg.norm(errors.e_p))
        if abort_threshold is not None and error_norm > abort_threshold:
            raise StabilityAbort(
                f"Position error { error_norm:.3f} m exceeds "
                f"{ abort_threshold } m at t = { t:.2f} s "
                f"(phase '{ script.phase(t) }', p = { np.round(state.p, 3).tolist() })"
            )
        rows.append(
            _row(t, script.phase(t), state, errors, actuators.alpha, f_i_true, wrench)
            | command
            | {"t_c": t_c}
        )

        actuators.alpha_cmd = command["alpha_cmd"]
        actuators.u = command["u"]
        for sub in range(scenario.substeps):
            t_phys = t + sub * scenario.physics_dt
            f_a, tau_a = hexa.aero_wrench(state, actuators.alpha)
            f_i = (
                scenario.profile(t_phys)
                if scenario.profile is not None
                else np.zeros(3)
            )
            state = hexa.dynamics_step(
                state,
                actuators,
                DisturbanceWrench(f_a=f_a, tau_a=tau_a, f_i=f_i),
                scenario.physics_dt,
                contact,
            )
            actuators.alpha = hexa.servo_step(
                actuators.alpha, actuators.alpha_cmd, scenario.physics_dt
            )
            mocap.record(state)

    if infeasible:
        logger.warning(
            "%d of %d control steps had no admissible angle", infeasible, n_steps
        )
    for row in rows:
        row.update({f"u_{ i + 1 }": value for i, value in enumerate(row.pop("u"))})
    return Trace.from_rows(rows, infeasible_count=infeasible)


# pylint: enable=too-many-locals,too-many-statements


# pylint: disable=too-many-arguments
def _allocate(
    hexa: Hexarotor,
    scenario: ScenarioConfig,
    wrench: BodyWrench,
    alpha: float,
    alpha_prev: float,
    baseline: BaselineConfig,
) -> Tuple[Dict[str, Any], float]:
    """Commanded angle and inputs of one control step, with the time it took"""
    if scenario.allocator == "baseline":
        start = time.perf_counter()
        result = hexa.baseline_allocate(wrench, alpha, baseline)
        t_c = time.perf_counter() - start
        scale = max(1.0, float(np.linalg.norm(wrench.as_vector())))
        return {
            "alpha_cmd": result.alpha_star,
            "u": result.u_star,
            "saturated": bool(result.residual > BASELINE_SATURATION_TOL * scale),
            "status": "baseline",
            "candidates": 0,
        }, t_c

    start = time.perf_counter()
    outcome = hexa.select(wrench.f, alpha_prev, scenario.selector)
    alloc_alpha = alpha if scenario.allocation_alpha == "actual" else outcome.alpha_star
    control = hexa.allocate(wrench, alloc_alpha, strict=False)
    t_c = time.perf_counter() - start
    return {
        "alpha_cmd": outcome.alpha_star,
        "u": control.u,
        "saturated": control.saturated,
        "status": outcome.status.value,
        "candidates": outcome.candidate_count,
    }, t_c


# pylint: enable=too-many-arguments


# pylint: disable=too-many-arguments
def _row(
    t: float,
    phase: str,
    state: RigidBodyState,
    errors: PoseErrors,
    alpha: float,
    f_i: np.ndarray,
    wrench: BodyWrench,
) -> Dict[str, Any]:
    row: Dict[str, Any] = {"t": round(t, 9), "phase": phase, "alpha": alpha}
    for name, vec in (
        ("p", state.p),
        ("e_p", errors.e_p),
        ("e_R", errors.e_R),
        ("f_i", f_i),
        ("f_c", wrench.f),
        ("tau_c", wrench.tau),
    ):
        row.update({f"{ name }_{ axis }": float(v) for axis, v in zip("xyz", vec)})
    row.update(
        {f"q_{ axis }": float(v) for axis, v in zip("wxyz", to_quaternion(state.R))}
    )
    return row


# pylint: enable=too-many-arguments


def wall_task(
    scenario: ScenarioConfig, hexa: Optional[Hexarotor] = None
) -> Trace:
    """
    Scripted contacts against the configured wall

    The platform takes off, then touches the wall at 1, 2 and 3 m height for
    5 s each, aiming 2 cm beyond the wall surface. The run stops with
    StabilityAbort when the position error exceeds ABORT_THRESHOLD.

    Raises:
        ConfigError: the scenario has no wall
        StabilityAbort: loss of stability
    """
    if scenario.wall is None:
        raise ConfigError("The wall task needs a wall in the scenario")
    trace = simulate(scenario, hexa=hexa, abort_threshold=ABORT_THRESHOLD)
    contact = trace.phase("contact")
    logger.info(
        "Wall task finished, mean contact force %.2f N over %d steps",
        float(contact.vectors("f_i")[:, 0].mean()) if len(contact) else 0.0,
        len(contact),
    )
    return trace
