import math

from kkltype.cube import CubeFunction, heat
from kkltype.errors import DomainError, ParameterRegionError
from kkltype.inequality_core import Evaluator, input_summary
from kkltype.log_config import get_logger
from kkltype.normed import NormedSpace, lp_norm
from kkltype.quadrature import DEFAULT_QUADRATURE
from kkltype.reports import PASS_GRACE, InequalityReport

logger = get_logger(__name__)


def in_admissible_region(p: float, q: float, t: float) -> bool:
    """e^{-2t} <= (p - 1)/(q - 1) for 1 < p <= q."""
    if p == q:
        return True
    return math.exp(-2.0 * t) <= (p - 1.0) / (q - 1.0) * (1.0 + PASS_GRACE)


def check_hypercontractivity(f: CubeFunction, p: float, q: float, t: float,
                             space: NormedSpace) -> InequalityReport:
    """
    ||P_t f||_q <= ||f||_p. Parameters outside the admissible region are refused with
    ParameterRegionError before anything is evaluated. Judged for Euclidean targets.
    """
    if not 1 < p <= q < math.inf:
        raise DomainError(f"Hypercontractivity needs 1 < p <= q < inf, got p={p}, q={q}.")
    if not t >= 0:
        raise DomainError(f"Heat time must be nonnegative, got {t}.")
    if not in_admissible_region(p, q, t):
        raise ParameterRegionError(
            f"e^(-2t) = {math.exp(-2.0 * t):.6g} exceeds (p-1)/(q-1) = {(p - 1.0) / (q - 1.0):.6g}; not evaluated.")
    return InequalityReport(
        name=HypercontractivityEvaluator.NAME,
        lhs=lp_norm(heat(f, t), q, space),
        rhs=lp_norm(f, p, space),
        constant_used=1.0,
        inputs=input_summary(f, space, p=p, q=q, t=t),
        constant_specified=space.q == 2,
    )


class HypercontractivityEvaluator(Evaluator):
    NAME = "hypercontractivity"
    DESCRIPTION = "Hypercontractivity of the heat semigroup: ||P_t f||_q <= ||f||_p."
    PARAMETERS = ("p", "q", "t")

    def __init__(self):
        super().__init__(name=HypercontractivityEvaluator.NAME, description=HypercontractivityEvaluator.DESCRIPTION)

    def evaluate(self, f, space, params, quad=DEFAULT_QUADRATURE):
        params = self.check_params(params)
        p = float(params.get("p", 2.0))
        q = float(params.get("q", 2.0))
        if "t" in params:
            t = float(params["t"])
        elif p == q:
            t = 0.0
        else:
            # smallest admissible time
            t = 0.5 * math.log((q - 1.0) / (p - 1.0))
        return check_hypercontractivity(f, p, q, t, space)
