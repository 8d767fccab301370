"""Exception hierarchy for the simulator."""


class KDSimError(Exception):
    """Base class for all package errors."""


class DomainError(KDSimError, ValueError):
    """An argument is outside the physical or mathematical domain of an operation."""


class ConfigError(KDSimError, ValueError):
    """A scenario file or configuration value is invalid.

    The message starts with the dotted path of the offending field when one
    can be identified, e.g. ``laser.avg_power_w: must be positive``.
    """


class NumericalError(KDSimError, RuntimeError):
    """A numerical routine failed to converge; the message carries diagnostics."""


class ExtractionError(KDSimError, RuntimeError):
    """Peaks in a scattering pattern cannot be separated by windowed integration."""
