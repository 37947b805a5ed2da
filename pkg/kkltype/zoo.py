"""
Canonical functions on the cube and the experiments run on them: dictators, parities,
majority, tribes, linear vector-valued functions, random functions, restrictions,
monotonicity and greedy bribery.

Zoo functions are addressable as `name:key=value,...`, for example `tribes:w=2,s=4`,
`parity:n=3,S=1+3` or `random:n=6,seed=7`.
"""
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from .cube import MAX_DIMENSION, CubeFunction, check_coordinate, check_dimension, degrees, subset_mask
from .errors import DomainError, NonBooleanError
from .log_config import get_logger
from .normed import NormedSpace, influences, signed_sums, variance

logger = get_logger(__name__)

RANDOM_LIMIT = 20
TRUTH_TABLE_LIMIT = 5


def _indices(n: int) -> np.ndarray:
    return np.arange(1 << check_dimension(n), dtype=np.int64)


def dictator(n: int, j: int = 1) -> CubeFunction:
    """f(eps) = eps_j."""
    check_coordinate(j, check_dimension(n))
    bits = (_indices(n) >> (j - 1)) & 1
    return CubeFunction(1 - 2 * bits, boolean=True)


def parity(n: int, subset: Optional[Iterable[int]] = None) -> CubeFunction:
    """f(eps) = eps^S; S defaults to every coordinate."""
    n = check_dimension(n)
    subset = range(1, n + 1) if subset is None else list(subset)
    for j in subset:
        check_coordinate(j, n)
    mask = subset_mask(subset)
    odd = degrees(n)[_indices(n) & mask] & 1
    return CubeFunction(1 - 2 * odd, boolean=True)


def majority(n: int) -> CubeFunction:
    """sign(eps_1 + ... + eps_n) for odd n."""
    n = check_dimension(n)
    if n % 2 == 0:
        raise DomainError(f"Majority needs an odd number of voters, got n={n}.")
    total = n - 2 * degrees(n)
    return CubeFunction(np.sign(total), boolean=True)


@dataclass(frozen=True)
class TribesParams:
    w: int
    s: int

    def __post_init__(self):
        if self.w < 1 or self.s < 1:
            raise DomainError(f"Tribes needs w >= 1 and s >= 1, got w={self.w}, s={self.s}.")

    @property
    def n(self) -> int:
        return self.w * self.s


def tribes(params: TribesParams, n: Optional[int] = None) -> CubeFunction:
    """
    +1 iff some tribe (a block of w consecutive coordinates) is unanimously +1.
    With n > w*s the trailing coordinates are dummies.
    """
    n = params.n if n is None else n
    if n < params.n:
        raise DomainError(f"Tribes with w={params.w}, s={params.s} needs n >= {params.n}, got {n}.")
    if n > MAX_DIMENSION:
        raise DomainError(f"Tribes can be materialised up to n = {MAX_DIMENSION}, got {n}.")
    idx = _indices(n)
    block = (1 << params.w) - 1
    unanimous = np.zeros(idx.shape, dtype=bool)
    for b in range(params.s):
        unanimous |= (idx & (block << (b * params.w))) == 0
    return CubeFunction(np.where(unanimous, 1, -1), boolean=True)


def tribes_influence_formula(params: TribesParams) -> float:
    """Inf_j(tribes) = 2^{-(w-1)} (1 - 2^{-w})^{s-1}, the same for every non-dummy j."""
    log_value = -(params.w - 1) * math.log(2.0) + (params.s - 1) * math.log1p(-2.0 ** -params.w)
    return math.exp(log_value)


class TribesScaling(NamedTuple):
    n: int
    w: int
    s: int
    influence: float
    normalized: float  # Inf_1 * n / log n


def tribes_scaling(n: int) -> TribesScaling:
    """Closed-form tribes profile at size n with w = ceil(log2 n - log2 ln n), s = floor(n / w)."""
    if n < 3:
        raise DomainError(f"Tribes scaling needs n >= 3, got {n}.")
    w = max(1, math.ceil(math.log2(n) - math.log2(math.log(n))))
    s = n // w
    influence = tribes_influence_formula(TribesParams(w, s))
    return TribesScaling(n, w, s, influence, influence * n / math.log(n))


def linear_function(xs) -> CubeFunction:
    """f(eps) = sum_j eps_j x_j; D_j f is the constant x_j."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    check_dimension(xs.shape[0])
    return CubeFunction(signed_sums(xs), boolean=False)


def restrict(f: CubeFunction, j: int, value: int) -> CubeFunction:
    """Pin coordinate j to value (+1 or -1); the others keep their order."""
    check_coordinate(j, f.n)
    if value not in (1, -1):
        raise DomainError(f"Restriction value must be +1 or -1, got {value!r}.")
    if f.n == 1:
        raise DomainError("Cannot restrict the only coordinate of a one-dimensional function.")
    bit = 0 if value == 1 else 1
    keep = ((np.arange(f.size) >> (j - 1)) & 1) == bit
    return CubeFunction(f.values[keep], boolean=f.is_boolean)


def is_monotone(f: CubeFunction) -> bool:
    """Checks every covering edge: raising eps_j from -1 to +1 never lowers f."""
    if not f.is_boolean:
        raise NonBooleanError("Monotonicity is checked for boolean functions.")
    values = f.scalar_values
    idx = np.arange(f.size)
    for j in range(f.n):
        low = (idx >> j) & 1 == 0  # eps_j = +1
        if np.any(values[idx[low]] < values[idx[low] ^ (1 << j)]):
            return False
    return True


class BriberyResult(NamedTuple):
    count: int
    fixed: List[int]        # original coordinates, in the order they were pinned to +1
    trace: List[float]      # mean of the restriction before the first and after every pin


def bribery_greedy(f: CubeFunction, target_mean: float = 0.99, min_mean: float = -0.99) -> BriberyResult:
    """
    Repeatedly pins to +1 the coordinate of largest influence in the current restriction
    (lowest coordinate on ties) until its mean reaches target_mean.
    """
    if not f.is_boolean:
        raise NonBooleanError("Bribery is defined for boolean functions.")
    if not -1 <= target_mean <= 1:
        raise DomainError(f"Target mean must lie in [-1, 1], got {target_mean}.")
    values = f.scalar_values.copy()
    if values.mean() < min_mean:
        raise DomainError(f"Initial mean {values.mean():.6g} is below the admissible {min_mean}.")
    if not is_monotone(f):
        logger.warning("Bribery on a non-monotone function: pinning may lower the mean.")

    coords = list(range(1, f.n + 1))
    fixed: List[int] = []
    trace = [float(values.mean())]
    while trace[-1] < target_mean and coords:
        idx = np.arange(values.shape[0])
        infl = np.array([np.mean(values != values[idx ^ (1 << b)]) for b in range(len(coords))])
        best = int(np.argmax(infl))
        if infl[best] == 0:
            logger.warning(f"No influential coordinate left at mean {trace[-1]:.6g}; stopping.")
            break
        values = values[((idx >> best) & 1) == 0]
        fixed.append(coords.pop(best))
        trace.append(float(values.mean()))
        logger.debug(f"Pinned coordinate {fixed[-1]}; mean now {trace[-1]:.6g}")
    return BriberyResult(len(fixed), fixed, trace)


def random_boolean(n: int, seed: int) -> CubeFunction:
    """Uniformly random truth table, deterministic in seed."""
    n = check_dimension(n)
    if n > RANDOM_LIMIT:
        raise DomainError(f"Random functions are generated up to n = {RANDOM_LIMIT}, got {n}.")
    rng = np.random.default_rng(seed)
    return CubeFunction(1 - 2 * rng.integers(0, 2, size=1 << n), boolean=True)


def random_vector(n: int, d: int, seed: int, model: str = "cube") -> CubeFunction:
    """i.i.d. values, uniform on [-1, 1]^d ('cube') or on the unit sphere ('sphere')."""
    n = check_dimension(n)
    if n > RANDOM_LIMIT:
        raise DomainError(f"Random functions are generated up to n = {RANDOM_LIMIT}, got {n}.")
    if d < 1:
        raise DomainError(f"Target dimension must be >= 1, got {d}.")
    rng = np.random.default_rng(seed)
    if model == "cube":
        values = rng.uniform(-1.0, 1.0, size=(1 << n, d))
    elif model == "sphere":
        values = rng.standard_normal(size=(1 << n, d))
        values /= np.linalg.norm(values, axis=1, keepdims=True)
    else:
        raise DomainError(f"Unknown value model '{model}' (expected 'cube' or 'sphere').")
    return CubeFunction(values, boolean=False)


def truth_table_function(n: int, table: int) -> CubeFunction:
    """Boolean function whose value at index i is -1 exactly when bit i of table is set."""
    n = check_dimension(n)
    if n > TRUTH_TABLE_LIMIT:
        raise DomainError(f"Truth tables are enumerated up to n = {TRUTH_TABLE_LIMIT}, got {n}.")
    if not 0 <= table < (1 << (1 << n)):
        raise DomainError(f"Truth table {table} is out of range for n={n}.")
    bits = np.array([(table >> i) & 1 for i in range(1 << n)], dtype=np.int64)
    return CubeFunction(1 - 2 * bits, boolean=True)


def function_summary(f: CubeFunction) -> Dict[str, Any]:
    """Mean, variance and, for boolean functions, influences and monotonicity."""
    space = NormedSpace(d=f.d)
    summary: Dict[str, Any] = {
        "n": f.n,
        "d": f.d,
        "boolean": f.is_boolean,
        "mean": [float(x) for x in f.mean()],
        "variance": variance(f, space),
    }
    if f.is_boolean:
        summary["influences"] = [float(x) for x in influences(f)]
        summary["monotone"] = is_monotone(f)
    return summary


class ZooSpec(NamedTuple):
    name: str
    params: Dict[str, str]


def parse_zoo_spec(text: str) -> ZooSpec:
    """'tribes:w=2,s=4' -> ZooSpec('tribes', {'w': '2', 's': '4'})."""
    name, _, rest = text.strip().partition(":")
    if not name:
        raise DomainError(f"Empty zoo specification {text!r}.")
    params: Dict[str, str] = {}
    for item in filter(None, (part.strip() for part in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise DomainError(f"Zoo parameter {item!r} in {text!r} is not of the form key=value.")
        params[key.strip()] = value.strip()
    return ZooSpec(name, params)


def _int(params: Dict[str, str], key: str, default: Optional[int] = None) -> int:
    if key not in params:
        if default is None:
            raise DomainError(f"Zoo parameter '{key}' is required.")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise DomainError(f"Zoo parameter '{key}' must be an integer, got {params[key]!r}.") from None


def _subset(raw: Optional[str]) -> Optional[Tuple[int, ...]]:
    if raw is None:
        return None
    try:
        return tuple(int(x) for x in raw.split("+") if x)
    except ValueError:
        raise DomainError(f"Parity subset must look like 1+2+3, got {raw!r}.") from None


def build_zoo_function(spec, seed: Optional[int] = None) -> CubeFunction:
    """Materialise a zoo function from its specification string (or parsed ZooSpec)."""
    if isinstance(spec, str):
        spec = parse_zoo_spec(spec)
    p = spec.params
    name = spec.name
    if name == "dictator":
        return dictator(_int(p, "n"), _int(p, "j", 1))
    if name == "parity":
        return parity(_int(p, "n"), _subset(p.get("S")))
    if name == "majority":
        return majority(_int(p, "n"))
    if name == "tribes":
        params = TribesParams(_int(p, "w"), _int(p, "s"))
        return tribes(params, _int(p, "n", params.n))
    if name == "linear":
        return linear_function(np.eye(_int(p, "n")))
    if name == "random":
        return random_boolean(_int(p, "n"), _int(p, "seed", seed))
    if name == "random_vector":
        return random_vector(_int(p, "n"), _int(p, "d", 1), _int(p, "seed", seed), p.get("model", "cube"))
    if name == "truth_table":
        return truth_table_function(_int(p, "n"), _int(p, "table"))
    raise DomainError(f"Unknown zoo function '{name}'. Known: {', '.join(ZOO_NAMES)}.")


ZOO_NAMES = ("dictator", "parity", "majority", "tribes", "linear", "random", "random_vector", "truth_table")

CATALOGUE = (
    "dictator:n=1",
    "dictator:n=3,j=2",
    "parity:n=2",
    "parity:n=4",
    "majority:n=3",
    "majority:n=5",
    "tribes:w=2,s=2",
    "tribes:w=2,s=3",
    "tribes:w=3,s=2",
    "tribes:w=2,s=2,n=5",
    "linear:n=3",
)
