"""
Exhaustive scans: evaluate one inequality on every non-constant boolean function of n <= 4
variables and keep the worst case.

Functions are enumerated by truth-table integer (bit i set means the value -1 at cube index i).
Ranges of tables are handed to worker processes; the reduction keeps the smallest
(slack, table) pair, so the result does not depend on the number of workers.
"""
import math
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, List, Mapping, NamedTuple, Optional, Tuple, Union

from .cube import CubeFunction
from .errors import DomainError, ScanSizeError
from .inequality_core import Evaluator, default_registry
from .log_config import get_logger
from .normed import NormedSpace
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec
from .reports import InequalityReport
from .zoo import truth_table_function

logger = get_logger(__name__)

SCAN_LIMIT = 4
_CHUNKS_PER_WORKER = 8


class ScanResult(NamedTuple):
    report: InequalityReport   # worst report (smallest slack)
    table: int                 # its truth-table integer
    function: CubeFunction
    count: int                 # number of functions evaluated
    failures: int              # reports with status FAIL


def _resolve(which: Union[str, Evaluator]) -> Evaluator:
    if isinstance(which, Evaluator):
        return which
    evaluator = default_registry().get_evaluator(which)
    if evaluator is None:
        raise DomainError(f"Unknown evaluator '{which}'. Known: {', '.join(default_registry().names())}.")
    return evaluator


def _scan_range(n: int, which: Union[str, Evaluator], params: Mapping[str, Any],
                quad: QuadratureSpec, start: int, stop: int) -> Tuple[Optional[Tuple[float, int, InequalityReport]], int, int]:
    """Worst (slack, table, report) over tables in [start, stop), plus evaluated and failed counts."""
    evaluator = _resolve(which)
    space = NormedSpace.scalar()
    full = (1 << (1 << n)) - 1
    best = None
    count = failures = 0
    for table in range(start, stop):
        if table == 0 or table == full:
            continue
        report = evaluator.evaluate(truth_table_function(n, table), space, params, quad)
        count += 1
        if report.constant_specified and not report.passed:
            failures += 1
        key = (report.slack, table)
        if best is None or key < best[:2]:
            best = (report.slack, table, report)
    return best, count, failures


def _chunks(total: int, pieces: int) -> List[Tuple[int, int]]:
    step = max(1, math.ceil(total / pieces))
    return [(start, min(start + step, total)) for start in range(0, total, step)]


def exhaustive_scan(n: int, which: Union[str, Evaluator], params: Optional[Mapping[str, Any]] = None,
                    threads: int = 1, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> ScanResult:
    """
    Minimum slack of evaluator `which` (an id or an instance) over all non-constant boolean
    functions of n variables. Ties go to the smaller truth-table integer.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"Scan dimension must be a positive integer, got {n!r}.")
    if n > SCAN_LIMIT:
        raise ScanSizeError(f"Exhaustive scans are limited to n <= {SCAN_LIMIT} (2^(2^n) functions), got n={n}.")
    evaluator = _resolve(which)
    params = dict(params or {})
    total = 1 << (1 << n)
    logger.info(f"Scanning {total - 2} functions on n={n} with '{evaluator.name}' ({threads} worker(s))")
    started = time.time()

    if threads <= 1 or total < 1024:
        partials = [_scan_range(n, evaluator, params, quad, 0, total)]
    else:
        ranges = _chunks(total, threads * _CHUNKS_PER_WORKER)
        # registered evaluators are looked up again in each worker; others travel pickled
        shipped = evaluator.name if default_registry().get_evaluator(evaluator.name) is evaluator else evaluator
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_scan_range, n, shipped, params, quad, a, b) for a, b in ranges]
            partials = [future.result() for future in futures]

    best = None
    count = failures = 0
    for partial, partial_count, partial_failures in partials:
        count += partial_count
        failures += partial_failures
        if partial is not None and (best is None or partial[:2] < best[:2]):
            best = partial
    slack, table, report = best
    logger.info(f"Scan done in {time.time() - started:.2f}s: min slack {slack:.6g} at table {table}, "
                f"{failures} failure(s)")
    return ScanResult(report, table, truth_table_function(n, table), count, failures)
