"""Exception hierarchy for giantcz."""

from __future__ import annotations


class GiantCZError(Exception):
    """Base class for all errors raised by giantcz."""


class ConfigurationError(GiantCZError, ValueError):
    """Invalid physical configuration or configuration document."""


class UnsupportedSectorError(ConfigurationError):
    """Excitation sector outside the implemented range."""


class BasisStateNotFoundError(GiantCZError, KeyError):
    """A basis state was looked up in a basis that does not contain it."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the message readable.
        return str(self.args[0]) if self.args else ""


class SectorMismatchError(GiantCZError, ValueError):
    """State, operator or observable belong to different sectors or dimensions."""


class ConvergenceError(GiantCZError, RuntimeError):
    """Time propagation could not reach the requested tolerance."""


class NumericalIntegrityError(GiantCZError, ArithmeticError):
    """A matrix violated positivity or consistency beyond tolerance."""


class CalibrationError(GiantCZError, RuntimeError):
    """A calibration search did not find the feature it looks for."""
