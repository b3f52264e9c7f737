"""Exception hierarchy for layerpot.

Every error raised on purpose by the library derives from LayerpotError, so
callers can catch the whole family with one clause while still getting a
meaningful subclass for programmatic handling.
"""


class LayerpotError(Exception):
    """Base class for all layerpot errors."""


class DimensionError(LayerpotError, ValueError):
    """A point or domain has an unsupported or inconsistent dimension."""


class SingularityError(LayerpotError, ValueError):
    """Evaluation requested exactly at a singular point of a kernel or field."""


class PlacementError(LayerpotError, ValueError):
    """A target point lies in a region where the operation is not defined."""


class RangeError(LayerpotError, ValueError):
    """A step or offset leaves the admissible range (e.g. escapes the domain)."""


class ExponentError(LayerpotError, ValueError):
    """A Lebesgue exponent violates the preconditions of an operation."""


class IntegrabilityError(LayerpotError, ValueError):
    """The requested integral does not converge for the given inputs."""


class CatalogError(LayerpotError, ValueError):
    """Unknown field name requested from the catalog."""


class ParameterError(LayerpotError, ValueError):
    """A parameter value is outside its admissible set."""


class CapabilityError(LayerpotError, ValueError):
    """The input object lacks a capability the operation requires."""


class ResolutionError(LayerpotError, RuntimeError):
    """Quadrature resolution is insufficient for a limit/extrapolation step."""


class BudgetError(LayerpotError, RuntimeError):
    """A quadrature node budget would be exceeded; lower the order."""


class ConfigError(LayerpotError, ValueError):
    """Configuration text is malformed or contains unknown keys."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}" + (f", column {column}" if column is not None else "") + f": {message}"
        super().__init__(message)
