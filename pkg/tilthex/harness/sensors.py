"""Motion-capture and force-sensor models"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Any, Deque, Dict, Optional

import numpy as np

from tilthex.errors import ConfigError, ContractViolation
from tilthex.geometry import so3_exp
from tilthex.methods.platform_model import RigidBodyState

DEG2_TO_RAD2 = (np.pi / 180.0) ** 2

# JSON keys of the angular covariances, given in deg^2 and deg^2/s^2
_DEGREE_KEYS = ("sigma_R", "sigma_omega")


def _vec3(value: Any, name: str) -> np.ndarray:
    arr = np.broadcast_to(np.asarray(value, dtype=float), (3,)).copy()
    if np.any(arr < 0):
        raise ConfigError(f"{ name } must be nonnegative, got { arr.tolist() }")
    return arr


# pylint: disable=invalid-name,too-many-instance-attributes
@dataclass(frozen=True, eq=False)
class SensorModels:
    """Diagonal sensor covariances, bias, delay and rates

    Angular covariances are held in rad^2 (and rad^2/s^2); from_dict converts
    them from degrees.

    Attributes:
        sigma_p: position covariance [m^2]
        sigma_R: attitude covariance [rad^2]
        sigma_v: velocity covariance [m^2/s^2]
        sigma_omega: angular velocity covariance [rad^2/s^2]
        mocap_delay: motion-capture latency [s]
        mocap_rate: motion-capture sample rate [Hz]
        sigma_f: force-sensor covariance [N^2]
        m_f: force-sensor bias [N]
        force_rate: force-sensor sample rate [Hz]
    """

    sigma_p: np.ndarray = field(
        default_factory=lambda: 1e-7 * np.array([4.099, 2.838, 0.211])
    )
    sigma_R: np.ndarray = field(
        default_factory=lambda: DEG2_TO_RAD2 * np.array([0.0012, 0.0011, 0.0011])
    )
    sigma_v: np.ndarray = field(
        default_factory=lambda: 1e-6 * np.array([2.050, 1.419, 0.105])
    )
    sigma_omega: np.ndarray = field(
        default_factory=lambda: DEG2_TO_RAD2 * np.array([0.0024, 0.0022, 0.0022])
    )
    mocap_delay: float = 0.012
    mocap_rate: float = 100.0
    sigma_f: np.ndarray = field(default_factory=lambda: np.full(3, 2.5e-3))
    m_f: np.ndarray = field(default_factory=lambda: np.full(3, 0.1))
    force_rate: float = 100.0

    def __post_init__(self):
        for name in ("sigma_p", "sigma_R", "sigma_v", "sigma_omega", "sigma_f"):
            object.__setattr__(self, name, _vec3(getattr(self, name), name))
        object.__setattr__(
            self, "m_f", np.broadcast_to(np.asarray(self.m_f, dtype=float), (3,)).copy()
        )
        if self.mocap_delay < 0:
            raise ConfigError(
                f"mocap_delay must be nonnegative, got { self.mocap_delay }"
            )
        if self.mocap_rate <= 0 or self.force_rate <= 0:
            raise ConfigError("Sensor rates must be positive")

    @classmethod
    def mocap_rig(cls) -> "SensorModels":
        """MoCap and force-sensor models of the case study"""
        return cls()

    @classmethod
    def noise_free(cls, mocap_delay: float = 0.0) -> "SensorModels":
        """Exact sensors, optionally keeping the motion-capture latency"""
        zero = np.zeros(3)
        return cls(
            sigma_p=zero,
            sigma_R=zero,
            sigma_v=zero,
            sigma_omega=zero,
            mocap_delay=mocap_delay,
            sigma_f=zero,
            m_f=zero,
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SensorModels":
        """
        Build from a scenario section, angular covariances in degrees

        The key "noise_free": true starts from exact sensors instead of the
        case-study models; the remaining keys override single fields.

        Examples:
            >>> models = SensorModels.from_dict({"sigma_R": [1.0, 1.0, 1.0]})
            >>> round(float(models.sigma_R[0]), 8)
            0.00030462
        """
        values = dict(data)
        base = cls.noise_free() if values.pop("noise_free", False) else cls()
        unknown = set(values) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"Unknown sensor keys: { sorted(unknown) }")
        for key in _DEGREE_KEYS:
            if key in values:
                values[key] = DEG2_TO_RAD2 * np.asarray(values[key], dtype=float)
        return replace(base, **values)


# pylint: enable=invalid-name,too-many-instance-attributes


def force_measure(
    f_i_true: np.ndarray, models: SensorModels, rng: np.random.Generator
) -> np.ndarray:
    """
    Biased, noisy reading of the interaction force

    A draw is taken even for a zero covariance, so that the stream of random
    numbers does not depend on the sensor settings.

    Examples:
        >>> rng = np.random.Generator(np.random.Philox(0))
        >>> exact = SensorModels.noise_free()
        >>> biased = SensorModels(sigma_f=np.zeros(3))
        >>> force_measure(np.array([0.0, 0.0, 10.0]), biased, rng).tolist()
        [0.1, 0.1, 10.1]
        >>> force_measure(np.array([1.0, 2.0, 3.0]), exact, rng).tolist()
        [1.0, 2.0, 3.0]
    """
    noise = rng.standard_normal(3) * np.sqrt(models.sigma_f)
    return np.asarray(f_i_true, dtype=float) + models.m_f + noise


def mocap_noise(
    state: RigidBodyState, models: SensorModels, rng: np.random.Generator
) -> RigidBodyState:
    """State plus zero-mean Gaussian noise, attitude perturbed on SO(3)"""
    draws = rng.standard_normal((4, 3))
    return RigidBodyState(
        p=state.p + draws[0] * np.sqrt(models.sigma_p),
        R=state.R @ so3_exp(draws[1] * np.sqrt(models.sigma_R)),
        v=state.v + draws[2] * np.sqrt(models.sigma_v),
        omega=state.omega + draws[3] * np.sqrt(models.sigma_omega),
    )


class MocapSensor:
    """Delayed, sampled and noisy view of the true state

    The true state is recorded at every physics step into a ring buffer long
    enough to cover the latency. A new measurement is taken at the sensor
    rate and held in between.

    Args:
        models: sensor models
        physics_dt: physics step [s]
        rng: random generator owned by the simulation
    """

    def __init__(
        self, models: SensorModels, physics_dt: float, rng: np.random.Generator
    ):
        self._models = models
        self._rng = rng
        self._delay_steps = int(round(models.mocap_delay / physics_dt))
        self._period = 1.0 / models.mocap_rate
        self._buffer: Deque[RigidBodyState] = deque(maxlen=self._delay_steps + 1)
        self._held: Optional[RigidBodyState] = None
        self._next_sample = 0.0

    @property
    def delay_steps(self) -> int:
        """Latency in physics steps"""
        return self._delay_steps

    def reset(self, state: RigidBodyState) -> None:
        """Fill the history with a state at rest"""
        self._buffer.clear()
        for _ in range(self._delay_steps + 1):
            self._buffer.append(state.copy())
        self._held = None
        self._next_sample = 0.0

    def record(self, state: RigidBodyState) -> None:
        """Push the true state after a physics step"""
        if not self._buffer:
            self.reset(state)
            return
        self._buffer.append(state.copy())

    def mocap_measure(self, t: float) -> RigidBodyState:
        """
        Measurement available at time t

        Returns the true state of one latency earlier plus noise, resampled
        only when a sensor period has elapsed.

        Examples:
            >>> rng = np.random.Generator(np.random.Philox(0))
            >>> sensor = MocapSensor(SensorModels.noise_free(0.012), 1e-3, rng)
            >>> sensor.reset(RigidBodyState())
            >>> for k in range(1, 21):
            ...     sensor.record(RigidBodyState(p=np.array([k * 1e-3, 0.0, 0.0])))
            >>> round(float(sensor.mocap_measure(0.02).p[0]), 6)
            0.008
        """
        if not self._buffer:
            raise ContractViolation("MocapSensor.reset must be called before measuring")
        if self._held is None or t >= self._next_sample - 1e-9:
            self._held = mocap_noise(self._buffer[0], self._models, self._rng)
            while self._next_sample <= t + 1e-9:
                self._next_sample += self._period
        return self._held.copy()
