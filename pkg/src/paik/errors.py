"""Error types raised across the package.

Every error that the library raises deliberately derives from
:class:`ModelError`, so callers can separate modeling failures from plain
programming mistakes.
"""

from __future__ import annotations


class ModelError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(ModelError, ValueError):
    """A physical parameter or argument is out of its allowed range."""


class ConfigError(ModelError):
    """A configuration file is malformed, incomplete, or contains unknown fields."""


class SingularFrequencyError(ModelError, ArithmeticError):
    """Evaluation hit a frequency where a circuit factor is singular.

    Carries the offending frequency and the name of the factor whose
    denominator vanished, so batch callers can report or skip the point.
    """

    def __init__(self, message: str, frequency_hz: float | None = None,
                 factor: str | None = None):
        super().__init__(message)
        self.frequency_hz = frequency_hz
        self.factor = factor


class BandUnboundedError(ModelError):
    """A requested level crossing never happens before the grid runs out.

    ``edge`` is ``"low"`` or ``"high"`` depending on which side of the peak
    failed to cross the level.
    """

    def __init__(self, message: str, edge: str):
        super().__init__(message)
        self.edge = edge


class DegenerateFitError(ModelError, ValueError):
    """A regression was requested on data that cannot constrain the fit."""


class InfiniteSnrError(ModelError, ZeroDivisionError):
    """SNR requested with exactly zero noise power in the band."""
