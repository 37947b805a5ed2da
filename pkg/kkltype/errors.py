"""Exception hierarchy for kkltype."""
from typing import Optional


class KKLTypeError(Exception):
    """Base class for every error raised on purpose by kkltype."""


class CoordinateError(KKLTypeError, ValueError):
    """A coordinate index j outside 1..n."""

    def __init__(self, j: int, n: int):
        super().__init__(f"Coordinate {j} is out of range for dimension n={n}.")
        self.j = j
        self.n = n


class DomainError(KKLTypeError, ValueError):
    """A numeric parameter outside its admissible domain."""


class NonBooleanError(KKLTypeError, ValueError):
    """An operation that needs a {-1, +1}-valued function received something else."""


class ParameterRegionError(KKLTypeError, ValueError):
    """Hypercontractivity parameters outside the admissible region; nothing was evaluated."""


class QuadratureError(KKLTypeError, ArithmeticError):
    """Adaptive quadrature did not reach a usable accuracy."""


class WeightDivergenceError(KKLTypeError, ArithmeticError):
    """The weight integral of h over [1, inf) diverges or is zero."""


class ScanSizeError(KKLTypeError, ValueError):
    """Exhaustive scans are limited to n <= 4."""


class FunctionFormatError(KKLTypeError, ValueError):
    """A malformed function file. Carries the offending field and, when known, the line."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        location = []
        if field:
            location.append(f"field '{field}'")
        if line is not None:
            location.append(f"line {line}")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")
        self.field = field
        self.line = line


class SuiteConfigError(KKLTypeError, ValueError):
    """A suite configuration that cannot be run."""
