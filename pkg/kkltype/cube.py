"""
Functions on the discrete cube {-1, 1}^n and their exact spectral calculus.

Layout convention used everywhere (and by the function file format): a point is an
integer index in [0, 2^n); coordinate j (1-based) is eps_j = +1 when bit (j - 1) of the
index is 0 and eps_j = -1 when it is 1. Values are stored as a (2^n, d) float array in
index order. Walsh coefficients use the same layout: entry m is a_S for
S = {j : bit (j - 1) of m is set}, normalized as a_S = E[eps^S f].
"""
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import CoordinateError, DomainError
from .log_config import get_logger
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, integrate_heat_time_vector

logger = get_logger(__name__)

MAX_DIMENSION = 30
EXACT_NOISE_LIMIT = 20  # exact expectation over xi is the default up to here
CHAIN_LIMIT = 16


def check_dimension(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or n < 1 or n > MAX_DIMENSION:
        raise DomainError(f"Dimension n must be an integer in [1, {MAX_DIMENSION}], got {n!r}.")
    return int(n)


def check_coordinate(j: int, n: int) -> int:
    if not isinstance(j, (int, np.integer)) or not 1 <= j <= n:
        raise CoordinateError(j, n)
    return int(j)


def degrees(n: int) -> np.ndarray:
    """|S| for every mask in [0, 2^n), i.e. the popcount of each index."""
    n = check_dimension(n)
    idx = np.arange(1 << n, dtype=np.int64)
    deg = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        deg += (idx >> b) & 1
    return deg


def subset_mask(subset: Iterable[int]) -> int:
    """Bitmask of a set of 1-based coordinates."""
    mask = 0
    for j in subset:
        if j < 1:
            raise CoordinateError(j, MAX_DIMENSION)
        mask |= 1 << (j - 1)
    return mask


@dataclass(frozen=True)
class CubePoint:
    """A point eps of {-1, 1}^n addressed by its index."""
    n: int
    index: int

    def __post_init__(self):
        check_dimension(self.n)
        if not 0 <= self.index < (1 << self.n):
            raise DomainError(f"Index {self.index} is outside [0, 2^{self.n}).")

    def sign(self, j: int) -> int:
        check_coordinate(j, self.n)
        return -1 if (self.index >> (j - 1)) & 1 else 1

    def coordinates(self) -> np.ndarray:
        bits = (self.index >> np.arange(self.n)) & 1
        return 1 - 2 * bits

    def flip(self, j: int) -> "CubePoint":
        check_coordinate(j, self.n)
        return CubePoint(self.n, self.index ^ (1 << (j - 1)))

    @classmethod
    def from_signs(cls, signs: Sequence[int]) -> "CubePoint":
        index = 0
        for b, s in enumerate(signs):
            if s not in (1, -1):
                raise DomainError(f"Coordinates must be +1 or -1, got {s!r}.")
            if s == -1:
                index |= 1 << b
        return cls(len(signs), index)


class CubeFunction:
    """
    A function {-1, 1}^n -> R^d, stored as an immutable (2^n, d) array.
    A function is boolean when d = 1 and every value is +1 or -1; the flag is
    detected from the values unless given explicitly.
    """

    __slots__ = ("_values", "_n", "_boolean")

    def __init__(self, values, boolean: Optional[bool] = None):
        arr = np.array(values, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise DomainError(f"Values must be a sequence of R^d vectors, got shape {arr.shape}.")
        size = arr.shape[0]
        if size < 2 or size & (size - 1):
            raise DomainError(f"Number of values must be 2^n with n >= 1, got {size}.")
        n = check_dimension(size.bit_length() - 1)
        detected = arr.shape[1] == 1 and bool(np.all(np.abs(arr) == 1.0))
        if boolean and not detected:
            raise DomainError("A function flagged boolean must be scalar with values in {-1, +1}.")
        arr.setflags(write=False)
        self._values = arr
        self._n = n
        self._boolean = detected if boolean is None else bool(boolean)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return self._n

    @property
    def d(self) -> int:
        return self._values.shape[1]

    @property
    def size(self) -> int:
        return self._values.shape[0]

    @property
    def is_boolean(self) -> bool:
        return self._boolean

    @property
    def scalar_values(self) -> np.ndarray:
        if self.d != 1:
            raise DomainError(f"Function is vector valued (d={self.d}).")
        return self._values[:, 0]

    def mean(self) -> np.ndarray:
        """E f, the coordinatewise average."""
        return self._values.mean(axis=0)

    def centered(self) -> "CubeFunction":
        return CubeFunction(self._values - self.mean(), boolean=False)

    def is_constant(self) -> bool:
        return bool(np.all(self._values == self._values[0]))

    def __call__(self, point: CubePoint) -> np.ndarray:
        if point.n != self._n:
            raise DomainError(f"Point dimension {point.n} does not match function dimension {self._n}.")
        return self._values[point.index]

    def __repr__(self) -> str:
        kind = "boolean" if self._boolean else f"d={self.d}"
        return f"<CubeFunction(n={self._n}, {kind})>"


@dataclass(frozen=True)
class WalshSpectrum:
    """Walsh coefficients a_S, one R^d vector per mask."""
    n: int
    d: int
    coeffs: np.ndarray

    def __post_init__(self):
        check_dimension(self.n)
        if self.coeffs.shape != (1 << self.n, self.d):
            raise DomainError(f"Coefficient array must have shape {(1 << self.n, self.d)}, got {self.coeffs.shape}.")

    def coefficient(self, subset: Iterable[int]) -> np.ndarray:
        mask = subset_mask(subset)
        if mask >= (1 << self.n):
            raise CoordinateError(mask.bit_length(), self.n)
        return self.coeffs[mask]

    def energy_by_degree(self) -> np.ndarray:
        """sum_{|S| = k} |a_S|^2 for k = 0..n (Euclidean norm)."""
        sq = np.sum(np.square(self.coeffs), axis=1)
        return np.bincount(degrees(self.n), weights=sq, minlength=self.n + 1)


def _butterfly(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard butterfly along axis 0: out[m] = sum_i (-1)^{|i & m|} v[i]."""
    a = np.array(values, dtype=float, copy=True)
    size = a.shape[0]
    trailing = a.shape[1:]
    a = a.reshape(size, -1)
    h = 1
    while h < size:
        view = a.reshape(size // (2 * h), 2, h, -1)
        upper = view[:, 0].copy()
        lower = view[:, 1]
        view[:, 0] += lower
        view[:, 1] = upper - lower
        h *= 2
    return a.reshape((size,) + trailing)


def walsh_transform(f: CubeFunction) -> WalshSpectrum:
    """a_S = 2^{-n} sum_eps eps^S f(eps), by the in-place butterfly in O(n 2^n) per coordinate."""
    coeffs = _butterfly(f.values) / f.size
    coeffs.setflags(write=False)
    return WalshSpectrum(f.n, f.d, coeffs)


def inverse_walsh(spectrum: WalshSpectrum) -> CubeFunction:
    """f(eps) = sum_S a_S eps^S."""
    return CubeFunction(_butterfly(spectrum.coeffs))


def xor_convolve(kernel: np.ndarray, values: np.ndarray) -> np.ndarray:
    """out[i] = sum_k kernel[k] * values[i ^ k], through the Walsh transform."""
    size = values.shape[0]
    transformed = _butterfly(kernel)[:, None] * _butterfly(values)
    return _butterfly(transformed) / size


def derivative(f: CubeFunction, j: int) -> CubeFunction:
    """D_j f(eps) = (f(eps) - f(eps with coordinate j flipped)) / 2."""
    check_coordinate(j, f.n)
    flipped = f.values[np.arange(f.size) ^ (1 << (j - 1))]
    return CubeFunction((f.values - flipped) / 2.0, boolean=False)


def laplacian(f: CubeFunction) -> CubeFunction:
    """Delta f = -sum_j D_j f; on the Fourier side the multiplier is -|S|."""
    total = np.zeros_like(f.values)
    for j in range(1, f.n + 1):
        total -= derivative(f, j).values
    return CubeFunction(total, boolean=False)


def heat(f: CubeFunction, t: float) -> CubeFunction:
    """P_t f, the Fourier multiplier e^{-t|S|}."""
    if not t >= 0:
        raise DomainError(f"Heat time must be nonnegative, got {t}.")
    if t == 0:
        return CubeFunction(f.values, boolean=f.is_boolean)
    spectrum = walsh_transform(f)
    damping = np.exp(-t * degrees(f.n).astype(float))
    coeffs = spectrum.coeffs * damping[:, None]
    return CubeFunction(_butterfly(coeffs), boolean=False)


def spectral_energy(f: CubeFunction) -> float:
    """sum_S |S| |a_S|^2, which equals sum_j E|D_j f|^2."""
    spectrum = walsh_transform(f)
    sq = np.sum(np.square(spectrum.coeffs), axis=1)
    return float(np.dot(degrees(f.n).astype(float), sq))


@dataclass(frozen=True)
class NoiseModel:
    """
    The coordinate noise xi(t) with P(xi = +1) = (1 + e^{-t})/2 and its standardization
    delta = (xi - E xi) / sqrt(Var xi). Requires t > 0: at t = 0 the noise is degenerate
    and delta is undefined.
    """
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError(f"Noise time must be positive, got {self.t}.")

    @property
    def p_plus(self) -> float:
        return (1.0 + math.exp(-self.t)) / 2.0

    @property
    def p_minus(self) -> float:
        return -math.expm1(-self.t) / 2.0

    @property
    def delta_plus(self) -> float:
        return math.sqrt(self.p_minus / self.p_plus)

    @property
    def delta_minus(self) -> float:
        return -math.sqrt(self.p_plus / self.p_minus)

    @property
    def sigma(self) -> float:
        """Standard deviation of xi, sqrt(1 - e^{-2t})."""
        return math.sqrt(-math.expm1(-2.0 * self.t))

    @property
    def time_scale(self) -> float:
        """1 / sqrt(e^{2t} - 1)."""
        return 1.0 / math.sqrt(math.expm1(2.0 * self.t)) if self.t < 350 else 0.0

    def mean_delta(self) -> float:
        return self.p_plus * self.delta_plus + self.p_minus * self.delta_minus

    def second_moment(self) -> float:
        return self.p_plus * self.delta_plus ** 2 + self.p_minus * self.delta_minus ** 2

    def pair_energy(self) -> float:
        """E (delta - delta')^2 for two independent copies, from the 4-point joint law."""
        probs = (self.p_plus, self.p_minus)
        deltas = (self.delta_plus, self.delta_minus)
        return sum(pa * pb * (da - db) ** 2
                   for pa, da in zip(probs, deltas)
                   for pb, db in zip(probs, deltas))

    def weights(self, n: int) -> np.ndarray:
        """P(xi = pattern k) for every k in [0, 2^n); bit set means xi = -1."""
        deg = degrees(n).astype(float)
        return np.exp((n - deg) * math.log(self.p_plus) + deg * math.log(self.p_minus))

    def deltas(self, n: int, j: int) -> np.ndarray:
        """delta_j as a function of the noise pattern k."""
        bit = 1 << (j - 1)
        k = np.arange(1 << n, dtype=np.int64)
        return np.where(k & bit, self.delta_minus, self.delta_plus)


class DecompositionEstimate(NamedTuple):
    value: np.ndarray           # the right-hand side, an R^d vector
    stderr: np.ndarray          # zero in exact mode
    samples: Optional[int]      # None in exact mode


def decomposition_rhs(f: CubeFunction, t: float, point: CubePoint,
                      samples: Optional[int] = None, seed: Optional[int] = None) -> DecompositionEstimate:
    """
    (1 / sqrt(e^{2t} - 1)) E_xi sum_j delta_j(t) D_j f(eps xi(t)) at one point.
    Exact summation over all xi by default (n <= 20); with a sample budget and seed,
    a seeded Monte Carlo estimate with its standard error.
    """
    if not t > 0:
        raise DomainError(f"Decomposition time must be positive, got {t}.")
    if point.n != f.n:
        raise DomainError(f"Point dimension {point.n} does not match function dimension {f.n}.")
    noise = NoiseModel(t)
    if samples is None:
        if f.n > EXACT_NOISE_LIMIT:
            raise DomainError(f"Exact expectation is limited to n <= {EXACT_NOISE_LIMIT}; supply samples and seed.")
        k = np.arange(f.size, dtype=np.int64)
        idx = point.index ^ k
        weights = noise.weights(f.n)
        total = np.zeros(f.d)
        for j in range(1, f.n + 1):
            bit = 1 << (j - 1)
            dj = (f.values[idx] - f.values[idx ^ bit]) / 2.0
            total += (weights * noise.deltas(f.n, j)) @ dj
        value = total * noise.time_scale
        return DecompositionEstimate(value, np.zeros(f.d), None)

    if samples < 2 or seed is None:
        raise DomainError("Sampled mode needs at least 2 samples and an explicit seed.")
    rng = np.random.default_rng(seed)
    flips = rng.random((samples, f.n)) < noise.p_minus
    patterns = flips.astype(np.int64) @ (np.int64(1) << np.arange(f.n, dtype=np.int64))
    idx = point.index ^ patterns
    contributions = np.zeros((samples, f.d))
    for j in range(1, f.n + 1):
        bit = 1 << (j - 1)
        dj = (f.values[idx] - f.values[idx ^ bit]) / 2.0
        delta = np.where(flips[:, j - 1], noise.delta_minus, noise.delta_plus)
        contributions += delta[:, None] * dj
    scale = noise.time_scale
    value = contributions.mean(axis=0) * scale
    stderr = contributions.std(axis=0, ddof=1) / math.sqrt(samples) * scale
    return DecompositionEstimate(value, stderr, samples)


def noise_expectation(f: CubeFunction, t: float) -> np.ndarray:
    """E_xi sum_j delta_j(t) D_j f(eps xi(t)) at every eps, as a (2^n, d) array."""
    if f.n > EXACT_NOISE_LIMIT:
        raise DomainError(f"Exact expectation is limited to n <= {EXACT_NOISE_LIMIT}.")
    if t <= 0:
        return np.zeros_like(f.values)
    noise = NoiseModel(t)
    weights = noise.weights(f.n)
    total = np.zeros_like(f.values)
    for j in range(1, f.n + 1):
        kernel = weights * noise.deltas(f.n, j)
        total += xor_convolve(kernel, derivative(f, j).values)
    return total


def decomposition_field(f: CubeFunction, t: float) -> CubeFunction:
    """decomposition_rhs at every point at once (exact)."""
    if not t > 0:
        raise DomainError(f"Decomposition time must be positive, got {t}.")
    return CubeFunction(noise_expectation(f, t) * NoiseModel(t).time_scale, boolean=False)


def heat_identity_residual(f: CubeFunction, t: float, step: float) -> float:
    """
    max_eps | -(P_{t+h} f - P_{t-h} f)(eps) / 2h - decomposition_rhs(f, t, eps) |,
    the central-difference check of the pointwise heat identity; O(h^2).
    """
    if not step > 0:
        raise DomainError(f"Finite-difference step must be positive, got {step}.")
    if not t - step > 0:
        raise DomainError(f"Need t - step > 0, got t={t}, step={step}.")
    forward = heat(f, t + step).values
    backward = heat(f, t - step).values
    difference = -(forward - backward) / (2.0 * step)
    rhs = decomposition_field(f, t).values
    return float(np.max(np.linalg.norm(difference - rhs, axis=1)))


def chain_reconstruct(f: CubeFunction, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> CubeFunction:
    """
    2 int_0^inf E_xi sum_j delta_j(t) D_j P_t f(eps xi(t)) dt / sqrt(e^{2t} - 1),
    which reconstructs f - E f.
    """
    if f.n > CHAIN_LIMIT:
        raise DomainError(f"Chain reconstruction needs exact inner expectations (n <= {CHAIN_LIMIT}).")
    shape = f.values.shape

    def kernel(t: float) -> np.ndarray:
        return 2.0 * noise_expectation(heat(f, t), t).ravel()

    logger.debug(f"Reconstructing n={f.n}, d={f.d} with {quad}")
    integral = integrate_heat_time_vector(kernel, quad, what="chain reconstruction")
    return CubeFunction(integral.reshape(shape), boolean=False)
