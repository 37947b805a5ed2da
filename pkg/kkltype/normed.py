"""
Target-space geometry: l_q^d norms, L^p norms of cube functions, influences,
independent-copy energy, empirical Rademacher type ratios and finite metric targets.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, NamedTuple, Optional, Sequence

import numpy as np

from .cube import CubeFunction, check_coordinate, derivative
from .errors import DomainError, NonBooleanError
from .log_config import get_logger

logger = get_logger(__name__)

EXACT_ENERGY_LIMIT = 13
EXACT_TYPE_LIMIT = 20
_PAIR_BLOCK = 1 << 22  # entries per block in the exact energy double sum


def _encode_exponent(q: float):
    return "inf" if math.isinf(q) else q


def _decode_exponent(raw) -> float:
    if isinstance(raw, str):
        if raw.strip().lower() in ("inf", "infinity"):
            return math.inf
        raise DomainError(f"Unrecognised exponent {raw!r}.")
    return float(raw)


def builtin_type2_bound(q: float) -> Optional[float]:
    """Standard type-2 constants for l_q: 1 for q = 2, sqrt(q - 1) for 2 < q < inf, none otherwise."""
    if q == 2:
        return 1.0
    if 2 < q < math.inf:
        return math.sqrt(q - 1.0)
    return None


@dataclass(frozen=True)
class NormedSpace:
    """
    l_q^d with optional Rademacher type bounds. When no type-2 bound is supplied the
    built-in one is used (and `type2_builtin` is set).
    """
    d: int
    q: float = 2.0
    type2_bound: Optional[float] = None
    typep_bounds: Mapping[float, float] = field(default_factory=dict)
    type2_builtin: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise DomainError(f"Space dimension must be a positive integer, got {self.d!r}.")
        if not self.q >= 1:
            raise DomainError(f"Norm exponent q must be >= 1, got {self.q}.")
        if self.type2_bound is None:
            default = builtin_type2_bound(self.q)
            object.__setattr__(self, "type2_bound", default)
            object.__setattr__(self, "type2_builtin", default is not None)
        elif not self.type2_bound >= 1:
            raise DomainError(f"Type-2 bound must be >= 1, got {self.type2_bound}.")
        for p, bound in self.typep_bounds.items():
            if not 1 <= p <= 2:
                raise DomainError(f"Type exponent must lie in [1, 2], got {p}.")
            if not bound >= 1:
                raise DomainError(f"Type-{p} bound must be >= 1, got {bound}.")

    @classmethod
    def scalar(cls) -> "NormedSpace":
        return cls(d=1, q=2.0)

    def type_bound(self, p: float) -> Optional[float]:
        """
        Supplied or built-in T_p bound. T_1 = 1 always holds by the triangle inequality, and a
        Hilbert target (q = 2) has T_p = 1 for every p in [1, 2].
        """
        if p == 2:
            return self.type2_bound
        if p in self.typep_bounds:
            return self.typep_bounds[p]
        if p == 1 or (self.q == 2 and 1 <= p <= 2):
            return 1.0
        return None

    def norms(self, values: np.ndarray) -> np.ndarray:
        """Row norms of an (m, d) array."""
        values = np.asarray(values, dtype=float)
        if values.ndim != 2 or values.shape[1] != self.d:
            raise DomainError(f"Expected vectors of dimension {self.d}, got shape {values.shape}.")
        return np.linalg.norm(values, ord=self.q, axis=1)

    def describe(self) -> str:
        q = "inf" if math.isinf(self.q) else f"{self.q:g}"
        return f"l_{q}^{self.d}"

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"d": int(self.d), "q": _encode_exponent(self.q)}
        if self.type2_bound is not None and not self.type2_builtin:
            data["type2_bound"] = self.type2_bound
        if self.typep_bounds:
            data["typep_bounds"] = {f"{p:g}": b for p, b in sorted(self.typep_bounds.items())}
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "NormedSpace":
        bounds = {float(p): float(b) for p, b in (data.get("typep_bounds") or {}).items()}
        return cls(
            d=int(data.get("d", 1)),
            q=_decode_exponent(data.get("q", 2.0)),
            type2_bound=data.get("type2_bound"),
            typep_bounds=bounds,
        )


def _check_space(f: CubeFunction, space: NormedSpace) -> None:
    if f.d != space.d:
        raise DomainError(f"Function has d={f.d} but the space is {space.describe()}.")


def vector_norm(v, space: NormedSpace) -> float:
    v = np.asarray(v, dtype=float).ravel()
    if v.shape[0] != space.d:
        raise DomainError(f"Vector has dimension {v.shape[0]}, space has {space.d}.")
    return float(np.linalg.norm(v, ord=space.q))


def _power_mean(norms: np.ndarray, p: float) -> float:
    """(mean norms^p)^{1/p}, scaled by the maximum so large p cannot overflow."""
    top = float(np.max(norms)) if norms.size else 0.0
    if top == 0.0:
        return 0.0
    if math.isinf(p):
        return top
    return top * float(np.mean((norms / top) ** p)) ** (1.0 / p)


def lp_norm(f: CubeFunction, p: float, space: NormedSpace) -> float:
    """(E ||f||^p)^{1/p}; p = inf gives the sup norm."""
    if not p >= 1:
        raise DomainError(f"L^p exponent must be >= 1, got {p}.")
    _check_space(f, space)
    return _power_mean(space.norms(f.values), p)


def influence(f: CubeFunction, j: int) -> float:
    """Inf_j(f) = P(f(eps) != f(eps with j flipped)) for boolean f."""
    if not f.is_boolean:
        raise NonBooleanError("Influence is defined for boolean functions only.")
    check_coordinate(j, f.n)
    values = f.scalar_values
    flipped = values[np.arange(f.size) ^ (1 << (j - 1))]
    return float(np.mean(values != flipped))


def influences(f: CubeFunction) -> np.ndarray:
    return np.array([influence(f, j) for j in range(1, f.n + 1)])


def derivative_norm(f: CubeFunction, j: int, p: float, space: NormedSpace) -> float:
    return lp_norm(derivative(f, j), p, space)


def derivative_norms(f: CubeFunction, p: float, space: NormedSpace) -> np.ndarray:
    """||D_j f||_p for j = 1..n."""
    return np.array([derivative_norm(f, j, p, space) for j in range(1, f.n + 1)])


def variance(f: CubeFunction, space: NormedSpace) -> float:
    """E||f - Ef||^2 with Ef the coordinatewise mean."""
    _check_space(f, space)
    return float(np.mean(space.norms(f.values - f.mean()) ** 2))


class VarianceEnergy(NamedTuple):
    var2: float
    energy: float
    stderr: float = 0.0
    samples: Optional[int] = None


def variance_and_energy(f: CubeFunction, space: NormedSpace,
                        samples: Optional[int] = None, seed: Optional[int] = None) -> VarianceEnergy:
    """
    var2 = E||f - Ef||^2 and energy = E||f(eps) - f(eps')||^2 for independent eps, eps'.
    The energy is an exact double sum for n <= 13, otherwise a seeded estimate.
    """
    var2 = variance(f, space)

    if samples is None:
        if f.n > EXACT_ENERGY_LIMIT:
            raise DomainError(f"Exact energy is limited to n <= {EXACT_ENERGY_LIMIT}; supply samples and seed.")
        block = max(1, _PAIR_BLOCK // (f.size * f.d))
        total = 0.0
        for start in range(0, f.size, block):
            rows = f.values[start:start + block]
            diff = (rows[:, None, :] - f.values[None, :, :]).reshape(-1, f.d)
            total += float(np.sum(space.norms(diff) ** 2))
        return VarianceEnergy(var2, total / float(f.size) ** 2)

    if samples < 2 or seed is None:
        raise DomainError("Sampled energy needs at least 2 samples and an explicit seed.")
    rng = np.random.default_rng(seed)
    left = rng.integers(0, f.size, size=samples)
    right = rng.integers(0, f.size, size=samples)
    squares = space.norms(f.values[left] - f.values[right]) ** 2
    stderr = float(np.std(squares, ddof=1) / math.sqrt(samples))
    return VarianceEnergy(var2, float(np.mean(squares)), stderr, samples)


def signed_sums(xs) -> np.ndarray:
    """sum_j eps_j x_j at every cube index, as a (2^n, d) array."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    sums = np.zeros((1, xs.shape[1]))
    for x in xs:
        # bit (j - 1) set selects the upper half, where eps_j = -1
        sums = np.concatenate([sums + x, sums - x])
    return sums


@dataclass(frozen=True)
class TypeRatioReport:
    vectors: np.ndarray
    p: float
    exact: bool
    ratio: float
    samples: Optional[int] = None
    seed: Optional[int] = None


def empirical_type_ratio(xs, p: float, space: NormedSpace,
                         samples: Optional[int] = None, seed: Optional[int] = None) -> TypeRatioReport:
    """
    R = (E||sum eps_j x_j||^p / sum ||x_j||^p)^{1/p}. Exact over all sign patterns for up
    to 20 vectors (a certified lower bound on T_p), seeded sampling otherwise.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if xs.shape[0] == 0:
        raise DomainError("Type ratio needs at least one vector.")
    if not p >= 1:
        raise DomainError(f"Type exponent must be >= 1, got {p}.")
    lengths = space.norms(xs)
    denominator = float(np.sum(lengths ** p))
    if denominator == 0.0:
        raise DomainError("Type ratio is undefined when every vector is zero.")

    count = xs.shape[0]
    if samples is None and count <= EXACT_TYPE_LIMIT:
        numerator = float(np.mean(space.norms(signed_sums(xs)) ** p))
        return TypeRatioReport(xs, p, True, (numerator / denominator) ** (1.0 / p))

    if samples is None or seed is None:
        raise DomainError(f"More than {EXACT_TYPE_LIMIT} vectors need a sample budget and seed.")
    rng = np.random.default_rng(seed)
    signs = 1.0 - 2.0 * rng.integers(0, 2, size=(samples, count))
    numerator = float(np.mean(space.norms(signs @ xs) ** p))
    logger.debug(f"Sampled type ratio over {samples} sign patterns (seed {seed})")
    return TypeRatioReport(xs, p, False, (numerator / denominator) ** (1.0 / p), samples, seed)


class FiniteMetricSpace:
    """A finite metric given by its distance matrix, validated on construction."""

    def __init__(self, dist, tolerance: float = 1e-12):
        matrix = np.array(dist, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
            raise DomainError(f"Distance matrix must be square and nonempty, got shape {matrix.shape}.")
        if not np.all(np.isfinite(matrix)) or np.any(matrix < 0):
            raise DomainError("Distances must be finite and nonnegative.")
        scale = tolerance * max(1.0, float(np.max(matrix)))
        if np.any(np.diag(matrix) != 0):
            raise DomainError("Distance matrix must have a zero diagonal.")
        if np.any(np.abs(matrix - matrix.T) > scale):
            raise DomainError("Distance matrix must be symmetric.")
        for k in range(matrix.shape[0]):
            through_k = matrix[:, k, None] + matrix[None, k, :]
            if np.any(matrix > through_k + scale):
                raise DomainError(f"Triangle inequality fails through point {k}.")
        matrix.setflags(write=False)
        self._dist = matrix

    @property
    def size(self) -> int:
        return self._dist.shape[0]

    @property
    def dist(self) -> np.ndarray:
        return self._dist

    @classmethod
    def from_points(cls, points: Sequence, space: NormedSpace) -> "FiniteMetricSpace":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        diff = (pts[:, None, :] - pts[None, :, :]).reshape(-1, pts.shape[1])
        return cls(space.norms(diff).reshape(pts.shape[0], pts.shape[0]))

    def to_dict(self) -> Dict[str, Any]:
        return {"m": self.size, "dist": [float(x) for x in self._dist.ravel()]}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "FiniteMetricSpace":
        m = int(data["m"])
        flat = list(data["dist"])
        if len(flat) != m * m:
            raise DomainError(f"Metric block needs {m * m} distances, got {len(flat)}.")
        return cls(np.array(flat, dtype=float).reshape(m, m))

    def __repr__(self) -> str:
        return f"<FiniteMetricSpace(m={self.size})>"


def boolean_to_indices(f: CubeFunction) -> CubeFunction:
    """Index-valued version of a boolean function: +1 -> point 0, -1 -> point 1."""
    if not f.is_boolean:
        raise NonBooleanError("Only boolean functions map onto a two-point metric.")
    return CubeFunction((1.0 - f.values) / 2.0, boolean=False)


class MetricEnergy(NamedTuple):
    lhs: float                  # E d(f(eps), f(eps'))^2
    edge_terms: np.ndarray      # E d(f(eps), f(eps with j flipped))^2, per j
    ratio_terms: np.ndarray     # E d / sqrt(E d^2) along coordinate j, 0 when the edge term is 0


def _metric_indices(f: CubeFunction, metric: FiniteMetricSpace) -> np.ndarray:
    if f.d != 1:
        raise DomainError("Metric targets take scalar index-valued functions.")
    raw = f.scalar_values
    idx = raw.astype(np.int64)
    if np.any(idx != raw) or np.any(idx < 0) or np.any(idx >= metric.size):
        raise DomainError(f"Function values must be point indices in [0, {metric.size}).")
    return idx


def metric_energy_terms(f: CubeFunction, metric: FiniteMetricSpace) -> MetricEnergy:
    idx = _metric_indices(f, metric)
    mass = np.bincount(idx, minlength=metric.size) / float(f.size)
    squared = np.square(metric.dist)
    lhs = float(mass @ squared @ mass)

    edges = np.zeros(f.n)
    ratios = np.zeros(f.n)
    positions = np.arange(f.size)
    for j in range(1, f.n + 1):
        distances = metric.dist[idx, idx[positions ^ (1 << (j - 1))]]
        edges[j - 1] = float(np.mean(np.square(distances)))
        if edges[j - 1] > 0:
            ratios[j - 1] = float(np.mean(distances)) / math.sqrt(edges[j - 1])
    return MetricEnergy(lhs, edges, ratios)
