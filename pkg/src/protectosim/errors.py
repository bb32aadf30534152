"""Exception and warning classes raised across the package."""


class ProtectosimError(Exception):
    """Base class for all package errors."""


class DegenerateField(ProtectosimError, ValueError):
    """The net field on the qubit vanishes, so its direction is undefined."""


class CapExceeded(ProtectosimError, ValueError):
    """Requested environment size is larger than the configured spin cap."""


class ZeroWidth(ProtectosimError, ValueError):
    """A Gaussian density was requested with zero width."""


class QuadratureFailure(ProtectosimError, RuntimeError):
    """A numerical integral did not reach its tolerance."""


class SingularPoint(ProtectosimError, ValueError):
    """Evaluation at the isolated point where an expansion breaks down."""


class ConfigError(ProtectosimError, ValueError):
    """Malformed configuration file or parameter set."""

    def __init__(self, message, *, key=None, line=None):
        self.key = key
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class UnknownFigure(ProtectosimError, ValueError):
    pass


class InvalidOverride(ConfigError):
    pass


class GridTooLarge(ProtectosimError, ValueError):
    pass


class EmptyGrid(ProtectosimError, ValueError):
    pass


class WeakMeasurementWarning(UserWarning):
    """Parameters lie outside the weak-measurement regime the model assumes."""


class RegimeWarning(UserWarning):
    """Inputs lie outside the regime where a linearized result is trusted."""
