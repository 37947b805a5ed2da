"""
Adaptive Gauss-Kronrod quadrature for the integrals that appear in the heat-semigroup
arguments.

Integrals over heat time of the form

    int_0^inf F(t) dt / sqrt(e^{2t} - 1)

have an endpoint singularity at t = 0. They are mapped to [0, 1) with u = 1 - e^{-t}
followed by w = sqrt(u), after which the measure becomes 2 dw / sqrt(2 - w^2) and the
integrand is bounded. QUADPACK (through scipy) does the adaptive panel work.
"""
import math
import warnings
from dataclasses import dataclass, replace
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError
from .log_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances handed to every adaptive integration."""
    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    limit: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"Quadrature relative tolerance must be positive, got {self.rel_tol}.")
        if self.abs_tol < 0:
            raise DomainError(f"Quadrature absolute floor must be nonnegative, got {self.abs_tol}.")
        if self.limit < 1:
            raise DomainError(f"Quadrature panel limit must be at least 1, got {self.limit}.")

    def with_overrides(self, **overrides: Any) -> "QuadratureSpec":
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **overrides)

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> "QuadratureSpec":
        if not data:
            return cls()
        return cls().with_overrides(
            rel_tol=data.get("rel_tol"),
            abs_tol=data.get("abs_tol"),
            limit=data.get("limit"),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {"rel_tol": self.rel_tol, "abs_tol": self.abs_tol, "limit": self.limit}


DEFAULT_QUADRATURE = QuadratureSpec()


def _accept(value: float, abserr: float, messages: List[str], quad: QuadratureSpec, what: str) -> float:
    if not math.isfinite(value):
        raise QuadratureError(f"{what}: non-finite value {value}.")
    if messages:
        # QUADPACK is conservative about its own error estimate; a warning is only fatal
        # when the estimate is far outside the requested tolerance.
        usable = max(quad.abs_tol, math.sqrt(quad.rel_tol) * max(1.0, abs(value)))
        if abserr > usable:
            raise QuadratureError(f"{what}: no convergence (estimate {value:.6g}, error {abserr:.3g}): {messages[0]}")
        logger.warning(f"{what}: accepted with error estimate {abserr:.3g} after warning: {messages[0]}")
    return value


def integrate_interval(func: Callable[[float], float], a: float, b: float,
                       quad: QuadratureSpec = DEFAULT_QUADRATURE,
                       points: Optional[Sequence[float]] = None,
                       what: str = "integral") -> float:
    """
    Adaptive Gauss-Kronrod integral of a scalar function over [a, b] (b may be inf).

    Breakpoints inside a finite [a, b] split it into panels that are integrated one at a
    time, each with the full subdivision budget; values and error estimates are summed.
    """
    edges = [a, b]
    if points is not None and math.isfinite(b):
        edges = [a] + sorted({float(p) for p in points if a < p < b}) + [b]
    value, abserr, messages = 0.0, 0.0, []
    for lo, hi in zip(edges, edges[1:]):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", integrate.IntegrationWarning)
            panel, panel_err = integrate.quad(func, lo, hi, epsabs=quad.abs_tol, epsrel=quad.rel_tol,
                                              limit=quad.limit)
        value += panel
        abserr += panel_err
        messages.extend(str(w.message) for w in caught if issubclass(w.category, integrate.IntegrationWarning))
    if len(edges) > 2:
        logger.debug(f"{what}: {len(edges) - 1} panels, error estimate {abserr:.3g}")
    return _accept(value, abserr, messages, quad, what)


def heat_time(w):
    """Heat time t for the unit-interval variable w, so that 1 - e^{-t} = w^2."""
    return -np.log1p(-np.square(w))


def heat_measure(w):
    """Density of dt / sqrt(e^{2t} - 1) with respect to dw."""
    return 2.0 / np.sqrt(2.0 - np.square(w))


def heat_breakpoints(times: Iterable[float]) -> List[float]:
    """Unit-interval locations of the given heat times (for panel breakpoints)."""
    return [math.sqrt(-math.expm1(-t)) for t in times if t > 0 and math.isfinite(t)]


def integrate_heat_time(kernel: Callable[[float], float],
                        quad: QuadratureSpec = DEFAULT_QUADRATURE,
                        times: Optional[Iterable[float]] = None,
                        what: str = "heat-time integral") -> float:
    """int_0^inf kernel(t) dt / sqrt(e^{2t} - 1) for a kernel bounded near t = 0."""
    def integrand(w: float) -> float:
        return kernel(float(heat_time(w))) * float(heat_measure(w))

    points = heat_breakpoints(times) if times is not None else None
    return integrate_interval(integrand, 0.0, 1.0, quad, points=points, what=what)


def integrate_heat_time_vector(kernel: Callable[[float], np.ndarray],
                               quad: QuadratureSpec = DEFAULT_QUADRATURE,
                               what: str = "heat-time vector integral") -> np.ndarray:
    """Vector-valued version of integrate_heat_time, adaptive in the max norm."""
    def integrand(w: float) -> np.ndarray:
        return np.asarray(kernel(float(heat_time(w))), dtype=float) * float(heat_measure(w))

    value, abserr, info = integrate.quad_vec(
        integrand, 0.0, 1.0,
        epsabs=quad.abs_tol, epsrel=quad.rel_tol, limit=quad.limit,
        norm="max", full_output=True,
    )
    scale = float(np.max(np.abs(value))) if np.size(value) else 0.0
    messages = [] if info.success else [str(info.message)]
    _accept(scale, abserr, messages, quad, what)
    return value
