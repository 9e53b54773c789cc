#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Exceptions raised by TiltHex"""

__license__ = "MIT"


class TiltHexError(Exception):
    """Base class for every error raised by the package"""


class ContractViolation(TiltHexError, ValueError):
    """A precondition on an argument was not met, e.g. rotor index 7"""


class SaturationError(TiltHexError):
    """A spin rate outside of [0, omega_max]"""


class SingularAllocationError(TiltHexError):
    """The allocation matrix is not invertible at the requested cant angle"""


class LutFormatError(TiltHexError):
    """A polytope LUT file is malformed, truncated or has the wrong version"""


class SolverFailure(TiltHexError):
    """The active-set solver hit its iteration cap"""


class AllocationFailure(TiltHexError):
    """The baseline allocator failed at every cant angle of its grid"""


class ConfigError(TiltHexError):
    """Invalid platform parameters or scenario configuration"""


class EmptyTraceError(TiltHexError):
    """A trace without control steps was handed to a consumer"""


class SimulationFault(TiltHexError):
    """The closed-loop simulation could not continue"""


class IntegrationFault(SimulationFault):
    """The rigid-body derivative became non-finite"""


class StabilityAbort(SimulationFault):
    """Position error exceeded the abort threshold during a scripted task"""
