from typing import Any, Mapping

import numpy as np

from kkltype.cube import CubeFunction
from kkltype.inequality_core import Evaluator, input_summary
from kkltype.log_config import get_logger
from kkltype.normed import NormedSpace, derivative_norms, variance
from kkltype.quadrature import DEFAULT_QUADRATURE, QuadratureSpec
from kkltype.reports import InequalityReport

logger = get_logger(__name__)


def eval_poincare(f: CubeFunction, space: NormedSpace) -> InequalityReport:
    """
    E||f - Ef||^2 <= sum_j E||D_j f||^2. Judged for Euclidean targets, where it holds with
    constant 1; for other norms the report is informational.
    """
    var2 = variance(f, space)
    rhs = float(np.sum(np.square(derivative_norms(f, 2.0, space))))
    return InequalityReport(
        name=PoincareEvaluator.NAME,
        lhs=var2,
        rhs=rhs,
        constant_used=1.0,
        inputs=input_summary(f, space),
        constant_specified=space.q == 2,
    )


class PoincareEvaluator(Evaluator):
    NAME = "poincare"
    DESCRIPTION = "Poincare inequality: variance against the sum of squared derivative norms."

    def __init__(self):
        super().__init__(name=PoincareEvaluator.NAME, description=PoincareEvaluator.DESCRIPTION)

    def evaluate(self, f: CubeFunction, space: NormedSpace, params: Mapping[str, Any],
                 quad: QuadratureSpec = DEFAULT_QUADRATURE) -> InequalityReport:
        self.check_params(params)
        return eval_poincare(f, space)
