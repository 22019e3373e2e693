"""Exception hierarchy shared by every stage of the toolchain."""

from __future__ import annotations


class SentryError(Exception):
    """Base class for all domain errors raised by sentryos."""


class GraphValidationError(SentryError, ValueError):
    """A graph file or graph object breaks one of the SDCNN graph rules."""


class LayerSpecError(SentryError, ValueError):
    """A generator layer list is empty or its layer dimensions do not line up."""


class CalibrationError(SentryError):
    """Cost-model coefficients no longer reproduce the baseline calibration."""


class NoFitError(SentryError):
    """A sub-network exceeds every core configuration of the palette."""


class CompileError(SentryError):
    """The compiler produced (or was handed) an inconsistent dataflow graph."""


class ProfileError(SentryError):
    """A stimulus does not match the graph it is applied to."""


class BusProgramError(SentryError):
    """Lane assignment or switch programming violated conflict-freedom."""


class ScheduleError(SentryError):
    """Timing analysis or scheduling could not produce a valid result."""


class InsufficientCoresError(ScheduleError):
    """More sub-networks than cores are available."""


class DivergenceError(ScheduleError):
    """Max-Plus power iteration did not settle within the iteration cap."""


class InconsistentArtifactError(SentryError):
    """Artifacts handed to one stage were produced from different inputs."""
