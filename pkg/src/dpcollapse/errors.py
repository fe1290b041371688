"""Exception and warning types raised across the package."""


class DPCollapseError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class DimensionError(DPCollapseError, ValueError):
    exit_code = 3


class DomainError(DPCollapseError, ValueError):
    exit_code = 4


class ConfigError(DPCollapseError, ValueError):
    """Bad configuration or material file entry.

    ``key`` and ``line`` point at the offending record when known.
    """

    exit_code = 2

    def __init__(self, message, key=None, line=None, source=None):
        self.key = key
        self.line = line
        self.source = source
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class QuadratureError(DPCollapseError, ArithmeticError):
    exit_code = 5

    def __init__(self, message, achieved=None):
        self.achieved = achieved
        super().__init__(message)


class NoReductionError(DPCollapseError):
    exit_code = 6


class MonotonicityError(DPCollapseError):
    exit_code = 7


class NoDecayTriggersError(DPCollapseError):
    exit_code = 8


class LatticeTooLargeError(DPCollapseError, ValueError):
    exit_code = 9


class ModelWarning(UserWarning):
    """A result was produced outside the regime the formulas were made for."""
