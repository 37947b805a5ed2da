"""
Weight functions h for the weighted Talagrand form and the mixture bounds.

A weight is a nondecreasing h >= 0 on [0, inf) with 0 < int_1^inf h(t)/t^2 dt < inf. The
mixture bounds work with g(y) = h(y^2), for which int_1^inf g(s)/s^3 ds is half of the
h-integral.

Built-in labels:
    one                 h(t) = 1
    sqrt                h(t) = t^{1/2}
    pow:alpha           h(t) = t^alpha, 0 <= alpha < 1
    t-over-log:eps      h(t) = t / log^{1+eps}(2 + t)
    t-over-loglog:eps   h(t) = t / (log(2 + t) (log log(10 + t))^{1+eps})
"""
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from .errors import DomainError, QuadratureError, WeightDivergenceError
from .log_config import get_logger
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, integrate_interval

logger = get_logger(__name__)

DIVERGENCE_CAP = 1e12
_CHECK_GRID = np.concatenate([[0.0], np.logspace(-6, 12, 181)])


def _log_log_shift(c: float, z: float) -> float:
    """log(log(c + t)) where log t = e^z, stable for every real z."""
    y = math.exp(z) if z < 700 else math.inf
    if y < 1e-300:
        return math.log(math.log1p(c))
    if math.isinf(y):
        return z
    return z + math.log1p(math.log1p(c * math.exp(-y)) / y)


@dataclass(frozen=True)
class WeightFunction:
    """
    h together with an optional closed-form log tail: log_tail(z) is the logarithm of
    h(t) / t * log t at t = exp(e^z), the integrand of int_1^inf h/t^2 after the
    substitution t = exp(e^z). Weights without it are integrated directly in t.
    """
    label: str
    h: Callable
    log_tail: Optional[Callable[[float], float]] = None

    def __call__(self, t):
        return self.h(t)

    def g(self, y):
        """g(y) = h(y^2)."""
        return self.h(np.square(y))

    def validate(self) -> None:
        values = np.asarray(self.h(_CHECK_GRID), dtype=float)
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise DomainError(f"Weight '{self.label}' must be finite and nonnegative.")
        steps = np.diff(values)
        if np.any(steps < -1e-12 * np.abs(values[1:])):
            raise DomainError(f"Weight '{self.label}' must be nondecreasing.")

    def __repr__(self) -> str:
        return f"<WeightFunction('{self.label}')>"


def _power(alpha: float) -> WeightFunction:
    if alpha < 0:
        raise DomainError(f"Weight exponent must be >= 0 for a nondecreasing h, got {alpha}.")
    if alpha >= 1:
        raise WeightDivergenceError(f"int_1^inf t^{alpha - 2} dt diverges for exponent {alpha} >= 1.")

    def h(t):
        return np.power(np.asarray(t, dtype=float), alpha)

    def log_tail(z):
        y = math.exp(z) if z < 700 else math.inf
        return (alpha - 1.0) * y + z

    label = "one" if alpha == 0 else ("sqrt" if alpha == 0.5 else f"pow:{alpha:g}")
    return WeightFunction(label, h, log_tail)


def _t_over_log(eps: float) -> WeightFunction:
    if not eps > 0:
        raise WeightDivergenceError(f"t / log^{{1+eps}}(2+t) needs eps > 0, got {eps}.")

    def h(t):
        t = np.asarray(t, dtype=float)
        return t / np.log(2.0 + t) ** (1.0 + eps)

    def log_tail(z):
        return z - (1.0 + eps) * _log_log_shift(2.0, z)

    return WeightFunction(f"t-over-log:{eps:g}", h, log_tail)


def _t_over_loglog(eps: float) -> WeightFunction:
    if not eps > 0:
        raise WeightDivergenceError(f"t / (log(2+t) loglog^{{1+eps}}(10+t)) needs eps > 0, got {eps}.")

    def h(t):
        t = np.asarray(t, dtype=float)
        return t / (np.log(2.0 + t) * np.log(np.log(10.0 + t)) ** (1.0 + eps))

    def log_tail(z):
        return z - _log_log_shift(2.0, z) - (1.0 + eps) * math.log(_log_log_shift(10.0, z))

    return WeightFunction(f"t-over-loglog:{eps:g}", h, log_tail)


_FAMILIES: Dict[str, Callable[[float], WeightFunction]] = {
    "pow": _power,
    "t-over-log": _t_over_log,
    "t-over-loglog": _t_over_loglog,
}


def weight_from_label(label: str) -> WeightFunction:
    """Look up a built-in weight by label, e.g. 'sqrt' or 't-over-log:0.5'."""
    text = label.strip()
    if text == "one":
        return _power(0.0)
    if text == "sqrt":
        return _power(0.5)
    family, sep, raw = text.partition(":")
    if not sep or family not in _FAMILIES:
        known = ", ".join(["one", "sqrt"] + [f"{k}:<x>" for k in _FAMILIES])
        raise DomainError(f"Unknown weight '{label}'. Known weights: {known}.")
    try:
        parameter = float(raw)
    except ValueError:
        raise DomainError(f"Weight '{label}' needs a numeric parameter.") from None
    return _FAMILIES[family](parameter)


def custom_weight(h: Callable, label: str = "custom") -> WeightFunction:
    return WeightFunction(label, h)


def weight_integral(weight: WeightFunction, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """int_1^inf h(t)/t^2 dt."""
    weight.validate()
    try:
        if weight.log_tail is not None:
            integrand = lambda z: math.exp(weight.log_tail(z))
            value = (integrate_interval(integrand, -math.inf, 0.0, quad, what=f"weight '{weight.label}' near 1")
                     + integrate_interval(integrand, 0.0, math.inf, quad, what=f"weight '{weight.label}' tail"))
        else:
            integrand = lambda t: float(weight.h(t)) / (t * t)
            value = integrate_interval(integrand, 1.0, math.inf, quad, what=f"weight '{weight.label}'")
    except QuadratureError as exc:
        raise WeightDivergenceError(f"Weight '{weight.label}': integral could not be resolved ({exc}).") from exc
    if value > DIVERGENCE_CAP:
        raise WeightDivergenceError(f"Weight '{weight.label}': integral exceeds {DIVERGENCE_CAP:g}.")
    if not value > 0:
        raise WeightDivergenceError(f"Weight '{weight.label}' vanishes on [1, inf).")
    logger.debug(f"Weight integral for '{weight.label}': {value:.12g}")
    return value


def g_integral(weight: WeightFunction, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """int_1^inf g(s)/s^3 ds for g(y) = h(y^2)."""
    return 0.5 * weight_integral(weight, quad)


def truncated_g_integral(weight: WeightFunction, upper: float,
                         quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """int_1^upper g(s)/s^3 ds, integrated in y = log t with t = s^2."""
    if not upper > 1:
        raise DomainError(f"Truncation point must exceed 1, got {upper}.")
    top = 2.0 * math.log(upper)
    integrand = lambda y: float(weight.h(math.exp(y))) * math.exp(-y)
    return 0.5 * integrate_interval(integrand, 0.0, top, quad, what=f"truncated weight '{weight.label}'")
