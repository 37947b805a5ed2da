"""
Scalar heat-time kernels from the semigroup proofs, and the intermediate chain quantities
that sit between ||f - Ef||_2 and the final logarithmic bounds.
"""
import math
from typing import Sequence

import numpy as np

from .cube import CubeFunction, heat
from .errors import DomainError
from .log_config import get_logger
from .normed import NormedSpace, derivative_norms
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, integrate_heat_time

logger = get_logger(__name__)

GAUSSIAN_CONSTANT = math.e * math.sqrt(math.pi)
CHAIN_CONSTANT = 2.0 ** 1.5


def kernel_exponent(t: float, p: float = 2.0) -> float:
    """theta_p(t) = (1 - e^{-2t}) / (1 + (p - 1) e^{-2t}); p = 2 gives tanh t."""
    decay = math.exp(-2.0 * t)
    return -math.expm1(-2.0 * t) / (1.0 + (p - 1.0) * decay)


def _time_hints(log_a: float) -> Sequence[float]:
    return [min(1.0, 1.0 / abs(log_a))] if log_a < 0 else []


def kernel_integral(a: float, p: float = 2.0, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """int_0^inf a^{theta_p(t)} dt / sqrt(e^{2t} - 1) for 0 < a <= 1 and p >= 1."""
    if not 0 < a <= 1:
        raise DomainError(f"Kernel argument a must lie in (0, 1], got {a}.")
    if not p >= 1:
        raise DomainError(f"Kernel exponent p must be >= 1, got {p}.")
    log_a = math.log(a)
    return integrate_heat_time(
        lambda t: math.exp(kernel_exponent(t, p) * log_a),
        quad, times=_time_hints(log_a), what=f"kernel integral (a={a:.6g}, p={p:g})",
    )


def kernel_gaussian_bound(a: float) -> float:
    """e sqrt(pi) / sqrt(log(e / a))."""
    if not 0 < a <= 1:
        raise DomainError(f"Kernel argument a must lie in (0, 1], got {a}.")
    return GAUSSIAN_CONSTANT / math.sqrt(1.0 - math.log(a))


def heat_derivative_energy(f: CubeFunction, t: float, space: NormedSpace) -> float:
    """sum_j ||D_j P_t f||_2^2."""
    return float(np.sum(np.square(derivative_norms(heat(f, t), 2.0, space))))


def prefinal_chain_bound(f: CubeFunction, space: NormedSpace, T2: float,
                         quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """
    2^{3/2} T2 int_0^inf (sum_j ||D_j P_t f||_2^2)^{1/2} dt / sqrt(e^{2t} - 1), the bound on
    ||f - Ef||_2 obtained before the derivative norms are separated from the kernel.
    """
    if not T2 >= 1:
        raise DomainError(f"Type-2 bound must be >= 1, got {T2}.")
    integral = integrate_heat_time(
        lambda t: math.sqrt(heat_derivative_energy(f, t, space)),
        quad, what="chain bound",
    )
    return CHAIN_CONSTANT * T2 * integral


def log_ratio_integral(l1: Sequence[float], l2: Sequence[float],
                       quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """
    int_0^inf (sum_j b_j^2 (a_j / b_j)^{2 theta(t)})^{1/2} dt / sqrt(e^{2t} - 1) with
    a_j = ||D_j f||_1, b_j = ||D_j f||_2 and theta = tanh; coordinates with b_j = 0 drop out.
    """
    l1 = np.asarray(l1, dtype=float)
    l2 = np.asarray(l2, dtype=float)
    active = l2 > 0
    if not np.any(active):
        return 0.0
    squares = np.square(l2[active])
    log_ratios = 2.0 * np.log(np.minimum(l1[active] / l2[active], 1.0))
    hints = [1.0 / abs(r) for r in log_ratios if r < -1.0]

    def kernel(t: float) -> float:
        theta = kernel_exponent(t)
        return math.sqrt(float(np.sum(squares * np.exp(theta * log_ratios))))

    return integrate_heat_time(kernel, quad, times=hints, what="log-ratio integral")
