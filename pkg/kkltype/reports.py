"""Report records produced by the inequality evaluators and the sharpness experiments."""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError

PASS_GRACE = 1e-12


class ReportStatus(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    EMPIRICAL = "EMPIRICAL"  # no explicit constant exists; the numbers are reported, not judged


@dataclass(frozen=True)
class InequalityReport:
    """
    One inequality evaluated on one input. For an upper bound the claim is lhs <= rhs,
    for a lower bound (`lower_bound=True`) it is lhs >= rhs; slack >= 1 means the claim
    holds. `extras` carries auxiliary numbers (empirical constants, alternative forms).
    """
    name: str
    lhs: float
    rhs: float
    constant_used: float
    inputs: Mapping[str, Any] = field(default_factory=dict)
    constant_specified: bool = True
    lower_bound: bool = False
    flags: Tuple[str, ...] = ()
    extras: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for label, value in (("lhs", self.lhs), ("rhs", self.rhs)):
            if math.isnan(value) or value < 0:
                raise DomainError(f"{self.name}: {label} must be a nonnegative number, got {value}.")
        object.__setattr__(self, "lhs", float(self.lhs))
        object.__setattr__(self, "rhs", float(self.rhs))
        object.__setattr__(self, "flags", tuple(self.flags))

    @property
    def slack(self) -> float:
        small, large = (self.rhs, self.lhs) if self.lower_bound else (self.lhs, self.rhs)
        if small == 0 or math.isinf(large):
            return math.inf
        return large / small

    @property
    def passed(self) -> bool:
        small, large = (self.rhs, self.lhs) if self.lower_bound else (self.lhs, self.rhs)
        return small <= large * (1.0 + PASS_GRACE)

    @property
    def status(self) -> ReportStatus:
        if not self.constant_specified:
            return ReportStatus.EMPIRICAL
        return ReportStatus.PASS if self.passed else ReportStatus.FAIL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "status": self.status.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant_used,
            "slack": self.slack,
            "pass": self.passed,
            "inputs": dict(self.inputs),
            "flags": list(self.flags),
            "extras": dict(self.extras),
        }

    def __repr__(self) -> str:
        return (f"<InequalityReport(name='{self.name}', status={self.status.value}, "
                f"lhs={self.lhs:.6g}, rhs={self.rhs:.6g}, slack={self.slack:.6g})>")


def exit_status(reports: Sequence[InequalityReport]) -> int:
    """1 when any report with a specified constant fails, else 0."""
    return 1 if any(r.status is ReportStatus.FAIL for r in reports) else 0


@dataclass(frozen=True)
class DerivativeBounds:
    """Per-coordinate (a_j, b_j) with ||D_j f||_1 <= a_j and ||D_j f||_2 <= b_j."""
    a: Tuple[float, ...]
    b: Tuple[float, ...]
    source: str = "supplied"

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        b = tuple(float(x) for x in self.b)
        if len(a) != len(b) or not a:
            raise DomainError("Derivative bounds need one (a_j, b_j) pair per coordinate.")
        if any(x < 0 or math.isnan(x) for x in a + b):
            raise DomainError("Derivative bounds must be nonnegative.")
        if any(x > y * (1.0 + PASS_GRACE) for x, y in zip(a, b)):
            raise DomainError("Derivative bounds need a_j <= b_j for every j.")
        if not any(y > 0 for y in b):
            raise DomainError("At least one b_j must be positive.")
        object.__setattr__(self, "a", tuple(min(x, y) for x, y in zip(a, b)))
        object.__setattr__(self, "b", b)

    @property
    def size(self) -> int:
        return len(self.b)

    def active(self) -> Tuple[int, ...]:
        """Coordinates (0-based) with b_j > 0; the others are dropped from every max."""
        return tuple(i for i, y in enumerate(self.b) if y > 0)

    def max_ratio(self) -> float:
        return max(self.a[i] / self.b[i] for i in self.active())

    def b_power_sum(self, p: float) -> float:
        return float(sum(y ** p for y in self.b))

    @classmethod
    def from_norms(cls, l1: Sequence[float], lp: Sequence[float]) -> Optional["DerivativeBounds"]:
        """Measured bounds; None when every derivative vanishes (constant f)."""
        if not np.any(np.asarray(lp) > 0):
            return None
        return cls(tuple(l1), tuple(lp), source="measured")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DerivativeBounds":
        return cls(tuple(data["a"]), tuple(data["b"]), source="supplied")

    def to_dict(self) -> Dict[str, Any]:
        return {"a": list(self.a), "b": list(self.b), "source": self.source}
