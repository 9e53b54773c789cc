"""Scenario configuration and its JSON loader"""
from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Union

import numpy as np

from tilthex.errors import ConfigError
from tilthex.harness.contact import WallContact
from tilthex.harness.profiles import ForceProfile
from tilthex.harness.references import HOVER_POSITION
from tilthex.harness.sensors import SensorModels
from tilthex.methods.cant_selector import SelectorConfig
from tilthex.methods.pose_controller import ControllerConfig, Gains
from tilthex.params import PlatformParams

logger = logging.getLogger(__name__)

AllocatorChoice = Literal["proposed", "baseline"]
AllocationAlpha = Literal["actual", "commanded"]

SCENARIO_KEYS = (
    "platform",
    "gains",
    "selector",
    "controller",
    "sensors",
    "profile",
    "wall",
    "allocator",
    "allocation_alpha",
    "seed",
    "duration",
    "physics_rate",
    "control_rate",
    "takeoff",
    "kpi_start",
    "lut_step_deg",
)


@dataclass(frozen=True, eq=False)
class TakeoffConfig:
    """Rest position, climb duration and hover position of the take-off"""

    start: np.ndarray = field(default_factory=lambda: np.zeros(3))
    duration: float = 5.0
    hover: np.ndarray = field(default_factory=lambda: np.array(HOVER_POSITION))

    def __post_init__(self):
        for name in ("start", "hover"):
            value = np.asarray(getattr(self, name), dtype=float)
            if value.shape != (3,):
                raise ConfigError(f"takeoff.{ name } must be a 3-vector")
            object.__setattr__(self, name, value)
        if self.duration < 0:
            raise ConfigError(
                f"takeoff.duration must be nonnegative, got { self.duration }"
            )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TakeoffConfig":
        """Build from a scenario section, rejecting unknown keys"""
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"Unknown takeoff keys: { sorted(unknown) }")
        return cls(**data)


# pylint: disable=too-many-instance-attributes
@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """Everything a closed-loop run depends on

    Either an interaction-force profile or a wall is configured, not both.
    Without either the platform just takes off and hovers.

    Examples:
        >>> ScenarioConfig().control_dt, ScenarioConfig().substeps
        (0.01, 10)
        >>> ScenarioConfig(physics_rate=1000.0, control_rate=300.0)
        Traceback (most recent call last):
        ...
        tilthex.errors.ConfigError: physics_rate must be a multiple of control_rate
    """

    platform: PlatformParams = field(default_factory=PlatformParams)
    gains: Gains = field(default_factory=Gains.free_flight)
    selector: SelectorConfig = field(default_factory=SelectorConfig)
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    sensors: SensorModels = field(default_factory=SensorModels.mocap_rig)
    profile: Optional[ForceProfile] = None
    wall: Optional[WallContact] = None
    allocator: AllocatorChoice = "proposed"
    allocation_alpha: AllocationAlpha = "actual"
    seed: int = 0
    duration: float = 80.0
    physics_rate: float = 1000.0
    control_rate: float = 100.0
    takeoff: TakeoffConfig = field(default_factory=TakeoffConfig)
    kpi_start: float = 20.0
    lut_step_deg: float = 1.0

    def __post_init__(self):
        if self.profile is not None and self.wall is not None:
            raise ConfigError("Configure either a force profile or a wall, not both")
        if self.allocator not in ("proposed", "baseline"):
            raise ConfigError(f"Unknown allocator '{ self.allocator }'")
        if self.allocation_alpha not in ("actual", "commanded"):
            raise ConfigError(
                f"allocation_alpha must be 'actual' or 'commanded', "
                f"got '{ self.allocation_alpha }'"
            )
        if self.duration < 0:
            raise ConfigError(f"duration must be nonnegative, got { self.duration }")
        if self.physics_rate <= 0 or self.control_rate <= 0:
            raise ConfigError("Rates must be positive")
        ratio = self.physics_rate / self.control_rate
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ConfigError("physics_rate must be a multiple of control_rate")
        if not 0 < self.lut_step_deg <= 60:
            raise ConfigError(
                f"lut_step_deg must lie in (0, 60], got { self.lut_step_deg }"
            )

    @property
    def physics_dt(self) -> float:
        """Physics step [s]"""
        return 1.0 / self.physics_rate

    @property
    def control_dt(self) -> float:
        """Control period [s]"""
        return 1.0 / self.control_rate

    @property
    def substeps(self) -> int:
        """Physics steps per control period"""
        return int(round(self.physics_rate / self.control_rate))

    @property
    def lut_step(self) -> float:
        """LUT grid step [rad]"""
        return float(np.deg2rad(self.lut_step_deg))

    @classmethod
    def hover(cls, **overrides: Any) -> "ScenarioConfig":
        """Take-off and hover without interaction"""
        return cls(**overrides)

    @classmethod
    def push_sequence(cls, **overrides: Any) -> "ScenarioConfig":
        """Weight-study scenario driven by the tabulated force profile"""
        values: Dict[str, Any] = {"profile": ForceProfile.push_sequence()}
        values.update(overrides)
        return cls(**values)

    @classmethod
    def wall_inspection(cls, **overrides: Any) -> "ScenarioConfig":
        """Wall task with the heavier platform and its gains"""
        values: Dict[str, Any] = {
            "platform": PlatformParams.wall_platform(),
            "gains": Gains.wall_task(),
            "controller": ControllerConfig(interaction_feedforward=0.5),
            "wall": WallContact(),
            "kpi_start": 0.0,
        }
        values.update(overrides)
        return cls(**values)

    def with_overrides(self, **changes: Any) -> "ScenarioConfig":
        """Copy with some fields replaced"""
        return replace(self, **changes)


# pylint: enable=too-many-instance-attributes


def scenario_from_dict(data: Dict[str, Any]) -> ScenarioConfig:
    """
    Build a scenario from its JSON mapping

    Every key is optional. With a wall configured the missing keys fall back
    to the wall-task preset (heavier platform, its gains, half interaction
    feed-forward), otherwise to the free-flight defaults.

    Raises:
        ConfigError: unknown keys or violated invariants

    Examples:
        >>> scenario = scenario_from_dict({"selector": {"r_star": 3.0}, "seed": 7})
        >>> scenario.selector.r_star, scenario.seed
        (3.0, 7)
        >>> scenario_from_dict({"rotors": 8})
        Traceback (most recent call last):
        ...
        tilthex.errors.ConfigError: Unknown scenario keys: ['rotors']
    """
    if not isinstance(data, dict):
        raise ConfigError("A scenario must be a JSON object")
    unknown = set(data) - set(SCENARIO_KEYS)
    if unknown:
        raise ConfigError(f"Unknown scenario keys: { sorted(unknown) }")

    values: Dict[str, Any] = {}
    try:
        wall = WallContact.from_dict(data["wall"]) if data.get("wall") else None
        # a wall starts from the wall-task preset
        base = (
            ScenarioConfig.wall_inspection() if wall is not None else ScenarioConfig()
        )
        values["wall"] = wall
        values["gains"] = Gains.from_dict(data.get("gains", {}), base.gains)
        values["platform"] = (
            PlatformParams.from_dict(data["platform"])
            if "platform" in data
            else base.platform
        )
        values["controller"] = ControllerConfig.from_dict(
            {**asdict(base.controller), **data.get("controller", {})}
        )
        values["kpi_start"] = float(data.get("kpi_start", base.kpi_start))
        if "selector" in data:
            values["selector"] = SelectorConfig.from_dict(data["selector"])
        if "sensors" in data:
            values["sensors"] = SensorModels.from_dict(data["sensors"])
        if data.get("profile"):
            values["profile"] = ForceProfile.from_dict(data["profile"])
        if "takeoff" in data:
            values["takeoff"] = TakeoffConfig.from_dict(data["takeoff"])
        for key in ("allocator", "allocation_alpha"):
            if key in data:
                values[key] = str(data[key])
        if "seed" in data:
            values["seed"] = int(data["seed"])
        for key in ("duration", "physics_rate", "control_rate", "lut_step_deg"):
            if key in data:
                values[key] = float(data[key])
        return ScenarioConfig(**values)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"Invalid scenario: { err }") from err


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """Read a scenario JSON file"""
    try:
        data = json.loads(Path(path).read_text(encoding="UTF-8"))
    except OSError as err:
        raise ConfigError(f"Cannot read scenario { path }: { err }") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"Scenario { path } is not valid JSON: { err }") from err
    scenario = scenario_from_dict(data)
    logger.info("Loaded scenario %s (allocator %s)", path, scenario.allocator)
    return scenario
