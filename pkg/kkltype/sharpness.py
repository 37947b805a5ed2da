"""
One-dimensional sharpness experiments for the weighted Talagrand bounds.

Random variables X with values in (0, 1] are stored through the logarithms of their atoms,
because the extremal constructions put mass on values like exp(-4^K) that underflow double
precision long before K gets interesting. Every expectation is assembled with log-sum-exp and
exponentiated only at the end.

The three experiments:

* the mixture bound   int_0^1 (E X^{s^2} g(log^{1/2}(1/X)))^{1/2} ds <= (sqrt 2 + 8 sqrt pi) (int_1^inf g/s^3)^{1/2};
* its converse: a dyadic mixture for which the left side is at least e^{-8}/2 times the same root;
* a family of weighted level sets on which the log-ratio heat integral grows without bound
  relative to (sum_k w_k b_k / log(1/b_k))^{1/2}, so that inequality admits no universal constant.
"""
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError
from .kernels import kernel_exponent
from .log_config import get_logger
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, integrate_heat_time, integrate_interval
from .reports import InequalityReport
from .weights import WeightFunction, g_integral, truncated_g_integral, weight_from_label

logger = get_logger(__name__)

MIXTURE_UPPER_CONSTANT = math.sqrt(2.0) + 8.0 * math.sqrt(math.pi)
MIXTURE_LOWER_CONSTANT = math.exp(-8.0) / 2.0
DYADIC_CONSTANT = math.sqrt(2.0 * math.pi)
PROBABILITY_TOLERANCE = 1e-12
DIRECT_LEVEL_LIMIT = 4  # exp(4^5) overflows a double
LOG4 = math.log(4.0)

MODES = ("log", "direct")


def log_sum_exp(terms: Iterable[float]) -> float:
    """log sum exp(term_i), shifted by the maximum so that nothing overflows."""
    terms = np.asarray(list(terms), dtype=float)
    if terms.size == 0:
        raise DomainError("log_sum_exp needs at least one term.")
    return float(logsumexp(terms))


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise DomainError(f"Unknown evaluation mode '{mode}' (expected one of {', '.join(MODES)}).")


def _log_h(weight: WeightFunction, t: np.ndarray) -> np.ndarray:
    values = np.asarray(weight(t), dtype=float)
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise DomainError(f"Weight '{weight.label}' must be finite and nonnegative on the atoms.")
    with np.errstate(divide="ignore"):
        return np.log(values)


class DiscreteRandomVariable:
    """
    A finitely supported X with 0 < X <= 1, given by atom logarithms L_i = log X_i <= 0 and
    probabilities (linear or as logarithms). Through X = exp(-Y^2) it also describes Y = (-L)^{1/2}.
    """

    def __init__(self, log_atoms: Sequence[float], probs: Optional[Sequence[float]] = None,
                 log_probs: Optional[Sequence[float]] = None):
        log_atoms = np.asarray(log_atoms, dtype=float).reshape(-1)
        if (probs is None) == (log_probs is None):
            raise DomainError("Give exactly one of probs and log_probs.")
        if log_probs is None:
            probs = np.asarray(probs, dtype=float).reshape(-1)
            if np.any(probs < 0):
                raise DomainError("Probabilities must be nonnegative.")
            with np.errstate(divide="ignore"):
                log_probs = np.log(probs)
        log_probs = np.asarray(log_probs, dtype=float).reshape(-1)
        if log_atoms.size == 0 or log_atoms.shape != log_probs.shape:
            raise DomainError("A random variable needs one probability per atom and at least one atom.")
        if np.any(np.isnan(log_atoms)) or np.any(log_atoms > 0) or np.any(np.isinf(log_atoms)):
            raise DomainError("Atom logarithms must be finite and <= 0 (atoms in (0, 1]).")
        if np.any(np.isnan(log_probs)) or np.any(log_probs > PROBABILITY_TOLERANCE):
            raise DomainError("Probabilities must lie in [0, 1].")
        total = log_sum_exp(log_probs)
        if abs(math.expm1(total)) > PROBABILITY_TOLERANCE:
            raise DomainError(f"Probabilities sum to {math.exp(total):.15g}, not 1.")
        self._log_atoms = log_atoms
        self._log_probs = log_probs

    @property
    def log_atoms(self) -> np.ndarray:
        return self._log_atoms.copy()

    @property
    def log_probs(self) -> np.ndarray:
        return self._log_probs.copy()

    @property
    def probs(self) -> np.ndarray:
        return np.exp(self._log_probs)

    @property
    def size(self) -> int:
        return self._log_atoms.size

    def y_values(self) -> np.ndarray:
        """Y = (log 1/X)^{1/2} per atom."""
        return np.sqrt(-self._log_atoms)

    def dyadic_masses(self) -> np.ndarray:
        """p_k = P(2^k <= Y < 2^{k+1}) for k = 0, 1, ..., up to the largest occupied level."""
        y = self.y_values()
        occupied = y >= 1
        if not np.any(occupied):
            return np.zeros(0)
        levels = np.floor(0.5 * np.log2(-self._log_atoms[occupied])).astype(int)
        masses = np.zeros(int(levels.max()) + 1)
        np.add.at(masses, levels, self.probs[occupied])
        return masses

    @classmethod
    def point_mass(cls, log_atom: float) -> "DiscreteRandomVariable":
        return cls([log_atom], log_probs=[0.0])

    @classmethod
    def uniform(cls, log_atoms: Sequence[float]) -> "DiscreteRandomVariable":
        k = len(log_atoms)
        return cls(log_atoms, log_probs=[-math.log(k)] * k)

    def __repr__(self) -> str:
        return f"<DiscreteRandomVariable(atoms={self.size}, min log atom={self._log_atoms.min():.6g})>"


def random_mixture(size: int, seed: int, scale: float = 20.0) -> DiscreteRandomVariable:
    """Random atoms with log X exponential of mean `scale` (one atom pinned at X = 1 on odd seeds)."""
    if size < 1:
        raise DomainError(f"Random variable needs at least one atom, got {size}.")
    rng = np.random.default_rng(seed)
    log_atoms = -rng.exponential(scale, size=size)
    if seed % 2:
        log_atoms[0] = 0.0
    probs = rng.dirichlet(np.ones(size))
    return DiscreteRandomVariable(log_atoms, log_probs=np.log(probs) - logsumexp(np.log(probs)))


def _coerce_weight(weight) -> WeightFunction:
    return weight if isinstance(weight, WeightFunction) else weight_from_label(str(weight))


def _s_breakpoints(log_atoms: np.ndarray) -> List[float]:
    deep = -log_atoms[log_atoms < -1.0]
    return sorted(set(float(x) for x in 1.0 / np.sqrt(deep)))


def mixture_integral(X: DiscreteRandomVariable, weight, quad: QuadratureSpec = DEFAULT_QUADRATURE,
                     mode: str = "log") -> float:
    """
    int_0^1 (E X^{s^2} g(log^{1/2}(1/X)))^{1/2} ds with g(y) = h(y^2), so the inner
    expectation is sum_i p_i exp(s^2 L_i) h(-L_i). Atoms at X = 1 contribute h(0).
    """
    _check_mode(mode)
    weight = _coerce_weight(weight)
    log_atoms = X.log_atoms
    h_values = np.asarray(weight(-log_atoms), dtype=float)
    log_h = _log_h(weight, -log_atoms)
    log_base = X.log_probs + log_h

    if mode == "log":
        if np.all(np.isneginf(log_base)):
            return 0.0

        def integrand(s: float) -> float:
            return math.exp(0.5 * float(logsumexp(log_base + s * s * log_atoms)))
    else:
        probs = X.probs
        atoms = np.exp(log_atoms)

        def integrand(s: float) -> float:
            return math.sqrt(float(np.sum(probs * atoms ** (s * s) * h_values)))

    return integrate_interval(integrand, 0.0, 1.0, quad, points=_s_breakpoints(log_atoms),
                              what=f"mixture integral ({mode})")


def mixture_dyadic_bound(X: DiscreteRandomVariable, weight) -> float:
    """
    g(1)^{1/2} + sqrt(2 pi) sum_k g(2^{k+1})^{1/2} 2^{-k} p_k^{1/2}, with p_k the dyadic masses of Y.
    Sits between mixture_integral and the upper mixture bound.
    """
    weight = _coerce_weight(weight)
    masses = X.dyadic_masses()
    total = math.sqrt(float(weight.g(1.0)))
    if masses.size:
        k = np.arange(masses.size)
        g_top = np.asarray(weight.g(2.0 ** (k + 1)), dtype=float)
        total += DYADIC_CONSTANT * float(np.sum(np.sqrt(g_top * masses) * 2.0 ** -k))
    return total


def check_mixture_upper_bound(X: DiscreteRandomVariable, weight,
                              quad: QuadratureSpec = DEFAULT_QUADRATURE) -> InequalityReport:
    """mixture_integral(X, g) <= (sqrt 2 + 8 sqrt pi) (int_1^inf g(s)/s^3 ds)^{1/2}."""
    weight = _coerce_weight(weight)
    root = math.sqrt(g_integral(weight, quad))
    return InequalityReport(
        name="mixture_upper",
        lhs=mixture_integral(X, weight, quad),
        rhs=MIXTURE_UPPER_CONSTANT * root,
        constant_used=MIXTURE_UPPER_CONSTANT,
        inputs={"atoms": X.size, "weight": weight.label},
        extras={"dyadic_bound": mixture_dyadic_bound(X, weight), "g_integral_root": root},
    )


def extremal_mixture(weight, K: int) -> DiscreteRandomVariable:
    """
    Y = 2^k with probability proportional to g(2^k) 4^{-k} for k = 1..K, renormalized over the
    first K levels; the atoms of X = exp(-Y^2) are stored as log values -4^k.
    """
    weight = _coerce_weight(weight)
    if not isinstance(K, (int, np.integer)) or K < 1:
        raise DomainError(f"Level count K must be a positive integer, got {K!r}.")
    k = np.arange(1, K + 1, dtype=float)
    log_atoms = -(4.0 ** k)
    log_masses = _log_h(weight, 4.0 ** k) - k * LOG4
    if np.all(np.isneginf(log_masses)):
        raise DomainError(f"Weight '{weight.label}' vanishes on every level; nothing to normalize.")
    return DiscreteRandomVariable(log_atoms, log_probs=log_masses - logsumexp(log_masses))


def check_mixture_lower_bound(weight, K: int, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> InequalityReport:
    """
    mixture_integral(extremal_mixture(g, K), g) >= (e^{-8}/2) (int_1^{2^{K+1}} g(s)/s^3 ds)^{1/2};
    the integral is truncated at the top level of the construction.
    """
    weight = _coerce_weight(weight)
    X = extremal_mixture(weight, K)
    root = math.sqrt(truncated_g_integral(weight, 2.0 ** (K + 1), quad))
    return InequalityReport(
        name="mixture_lower",
        lhs=mixture_integral(X, weight, quad),
        rhs=MIXTURE_LOWER_CONSTANT * root,
        constant_used=MIXTURE_LOWER_CONSTANT,
        inputs={"K": K, "weight": weight.label},
        lower_bound=True,
        extras={"g_integral_root": root},
    )


@dataclass(frozen=True)
class LevelWeights:
    """Levels k = 1..K, stored as log(w_k b_k) and log b_k < 0; log w_k is derived on demand."""
    log_wb: tuple
    log_b: tuple

    def __post_init__(self):
        if len(self.log_wb) != len(self.log_b) or not self.log_wb:
            raise DomainError("Level weights need K >= 1 levels with one weight and one value each.")
        if any(b >= 0 or math.isnan(b) for b in self.log_b):
            raise DomainError("Level values must lie in (0, 1), i.e. log b_k < 0.")

    @property
    def K(self) -> int:
        return len(self.log_b)

    @property
    def log_w(self) -> np.ndarray:
        return np.asarray(self.log_wb) - np.asarray(self.log_b)

    def log_level_terms(self) -> np.ndarray:
        """log(w_k b_k / log(1/b_k))."""
        log_b = np.asarray(self.log_b)
        return np.asarray(self.log_wb) - np.log(-log_b)

    def log_heat_terms(self, t: float) -> np.ndarray:
        """log(w_k b_k^{1 + tanh t})."""
        return np.asarray(self.log_wb) + kernel_exponent(t) * np.asarray(self.log_b)


def counterexample_levels(K: int) -> LevelWeights:
    """log b_k = -4^k and log(w_k b_k) = k log 4, so every w_k b_k / log(1/b_k) equals 1."""
    if not isinstance(K, (int, np.integer)) or K < 1:
        raise DomainError(f"Level count K must be a positive integer, got {K!r}.")
    k = np.arange(1, K + 1, dtype=float)
    return LevelWeights(tuple(k * LOG4), tuple(-(4.0 ** k)))


def _levels(levels) -> LevelWeights:
    return levels if isinstance(levels, LevelWeights) else counterexample_levels(levels)


def counterexample_lhs(levels, quad: QuadratureSpec = DEFAULT_QUADRATURE, mode: str = "log") -> float:
    """int_0^inf (sum_k w_k b_k^{1 + tanh t})^{1/2} dt / sqrt(e^{2t} - 1)."""
    _check_mode(mode)
    levels = _levels(levels)
    hints = [1.0 / -b for b in levels.log_b]
    if mode == "log":
        kernel = lambda t: math.exp(0.5 * float(logsumexp(levels.log_heat_terms(t))))
    else:
        if levels.K > DIRECT_LEVEL_LIMIT or max(levels.log_w) > 700:
            raise DomainError(f"Direct evaluation overflows beyond K = {DIRECT_LEVEL_LIMIT}; use mode 'log'.")
        w = np.exp(np.asarray(levels.log_w))
        b = np.exp(np.asarray(levels.log_b))
        kernel = lambda t: math.sqrt(float(np.sum(w * b ** (1.0 + kernel_exponent(t)))))
    return integrate_heat_time(kernel, quad, times=hints, what=f"weighted log-ratio integral (K={levels.K}, {mode})")


def counterexample_rhs(levels) -> float:
    """(sum_k w_k b_k / log(1/b_k))^{1/2}."""
    return math.exp(0.5 * log_sum_exp(_levels(levels).log_level_terms()))


def counterexample_ratio(levels, quad: QuadratureSpec = DEFAULT_QUADRATURE, mode: str = "log") -> float:
    levels = _levels(levels)
    return counterexample_lhs(levels, quad, mode) / counterexample_rhs(levels)


def counterexample_report(K: int, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> InequalityReport:
    """The level-K instance as an empirical report; its constant grows with K."""
    levels = counterexample_levels(K)
    lhs = counterexample_lhs(levels, quad)
    rhs = counterexample_rhs(levels)
    return InequalityReport(
        name="weighted_log_ratio",
        lhs=lhs,
        rhs=rhs,
        constant_used=1.0,
        inputs={"K": K},
        constant_specified=False,
        extras={"empirical_constant": lhs / rhs},
    )


def counterexample_sweep(levels: Sequence[int] = (1, 2, 4, 8, 16, 32),
                         quad: QuadratureSpec = DEFAULT_QUADRATURE) -> List[InequalityReport]:
    reports = []
    for K in levels:
        report = counterexample_report(K, quad)
        logger.info(f"K={K}: ratio {report.extras['empirical_constant']:.6g}")
        reports.append(report)
    return reports


def mixture_sweep(weights: Sequence[str] = ("one", "pow:0.25", "sqrt", "pow:0.45"),
                  levels: Sequence[int] = (2, 4, 6, 8),
                  quad: QuadratureSpec = DEFAULT_QUADRATURE) -> List[InequalityReport]:
    """Lower and upper mixture bounds on the extremal mixtures, weight by weight and level by level."""
    reports = []
    for label in weights:
        weight = weight_from_label(label)
        for K in levels:
            reports.append(check_mixture_lower_bound(weight, K, quad))
            reports.append(check_mixture_upper_bound(extremal_mixture(weight, K), weight, quad))
            logger.debug(f"Mixture bounds done for weight '{label}', K={K}")
    return reports
