"""
Talagrand-type inequalities: the weighted form with constant 12, the epsilon-loss form
(empirical constant) and the probe of the unweighted log-ratio integral.
"""
import math
from typing import Optional, Tuple, Union

import numpy as np

from kkltype.cube import CubeFunction
from kkltype.errors import DomainError
from kkltype.inequality_core import Evaluator, input_summary
from kkltype.kernels import CHAIN_CONSTANT, log_ratio_integral
from kkltype.log_config import get_logger
from kkltype.normed import NormedSpace, derivative_norms, lp_norm
from kkltype.quadrature import DEFAULT_QUADRATURE, QuadratureSpec
from kkltype.reports import InequalityReport
from kkltype.weights import WeightFunction, weight_from_label, weight_integral

logger = get_logger(__name__)

TALAGRAND_CONSTANT = 12.0


def _derivative_profile(f: CubeFunction, space: NormedSpace) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(||D_j f||_1, ||D_j f||_2, log(||D_j f||_2 / ||D_j f||_1)) over the active coordinates."""
    l1 = derivative_norms(f, 1.0, space)
    l2 = derivative_norms(f, 2.0, space)
    active = l2 > 0
    l1, l2 = l1[active], l2[active]
    log_ratios = np.maximum(np.log(l2 / l1), 0.0)
    return l1, l2, log_ratios


def _weighted_sum(squares: np.ndarray, denominators: np.ndarray) -> Tuple[float, bool]:
    """sum squares / denominators; +inf (flagged) when a denominator vanishes."""
    if np.any(denominators == 0):
        return math.inf, True
    return float(np.sum(squares / denominators)), False


def _coerce_weight(raw: Union[str, WeightFunction]) -> WeightFunction:
    return raw if isinstance(raw, WeightFunction) else weight_from_label(str(raw))


def eval_talagrand_general(f: CubeFunction, space: NormedSpace, h: Union[str, WeightFunction] = "one",
                           T2: Optional[float] = None,
                           quad: QuadratureSpec = DEFAULT_QUADRATURE) -> InequalityReport:
    """
    ||f - Ef||_2 <= 12 T2 (int_1^inf h/t^2)^{1/2} (sum_j ||D_j f||_2^2 / h(log(||D_j f||_2/||D_j f||_1)))^{1/2}.
    A coordinate whose weight vanishes makes the right side infinite (flagged).
    """
    weight = _coerce_weight(h)
    T2 = space.type2_bound if T2 is None else float(T2)
    if T2 is None:
        raise DomainError(f"No type-2 bound is known for {space.describe()}; supply T2.")
    integral = weight_integral(weight, quad)
    lhs = lp_norm(f.centered(), 2.0, space)
    _, l2, log_ratios = _derivative_profile(f, space)
    total, vanished = _weighted_sum(np.square(l2), np.asarray(weight(log_ratios), dtype=float))
    constant = TALAGRAND_CONSTANT * T2 * math.sqrt(integral)
    return InequalityReport(
        name=TalagrandWeightedEvaluator.NAME,
        lhs=lhs,
        rhs=constant * math.sqrt(total),
        constant_used=constant,
        inputs=input_summary(f, space, h=weight.label, T2=T2),
        flags=("weight_vanishes",) if vanished else (),
        extras={"weight_integral": integral},
    )


def eval_talagrand_eps_ratio(f: CubeFunction, space: NormedSpace, eps: float) -> InequalityReport:
    """
    ||f - Ef||_2 against (1/sqrt(eps)) (sum_j ||D_j f||_2^2 / log^{1-eps}(||D_j f||_2/||D_j f||_1))^{1/2};
    the constant is not explicit, so the smallest one that works is reported.
    """
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}.")
    lhs = lp_norm(f.centered(), 2.0, space)
    _, l2, log_ratios = _derivative_profile(f, space)
    total, vanished = _weighted_sum(np.square(l2), log_ratios ** (1.0 - eps))
    rhs = math.sqrt(total / eps)
    empirical = lhs / rhs if 0 < rhs < math.inf else 0.0
    return InequalityReport(
        name=TalagrandEpsEvaluator.NAME,
        lhs=lhs,
        rhs=rhs,
        constant_used=1.0,
        inputs=input_summary(f, space, eps=eps),
        constant_specified=False,
        flags=("log_ratio_vanishes",) if vanished else (),
        extras={"empirical_constant": empirical},
    )


def eval_log_ratio_probe(f: CubeFunction, space: NormedSpace,
                         quad: QuadratureSpec = DEFAULT_QUADRATURE) -> InequalityReport:
    """
    The log-ratio integral int_0^inf (sum_j b_j^2 (a_j/b_j)^{2 tanh t})^{1/2} dt / sqrt(e^{2t} - 1)
    against (sum_j b_j^2 / log(b_j/a_j))^{1/2}, with a_j = ||D_j f||_1 and b_j = ||D_j f||_2.
    No universal constant is known for this comparison; the ratio is reported. The extras
    carry the bound 2^{3/2} T2 * integral on ||f - Ef||_2 when T2 is known.
    """
    l1, l2, log_ratios = _derivative_profile(f, space)
    integral = log_ratio_integral(l1, l2, quad)
    total, vanished = _weighted_sum(np.square(l2), log_ratios)
    rhs = math.sqrt(total)
    extras = {"empirical_constant": integral / rhs if 0 < rhs < math.inf else 0.0}
    if space.type2_bound is not None:
        extras["variance_bound"] = CHAIN_CONSTANT * space.type2_bound * integral
        extras["variance_root"] = lp_norm(f.centered(), 2.0, space)
    return InequalityReport(
        name=LogRatioProbeEvaluator.NAME,
        lhs=integral,
        rhs=rhs,
        constant_used=1.0,
        inputs=input_summary(f, space, rel_tol=quad.rel_tol),
        constant_specified=False,
        flags=("log_ratio_vanishes",) if vanished else (),
        extras=extras,
    )


class TalagrandWeightedEvaluator(Evaluator):
    NAME = "talagrand_weighted"
    DESCRIPTION = "Weighted Talagrand inequality for type-2 targets with constant 12 T2 (int h/t^2)^{1/2}."
    PARAMETERS = ("h", "T2")

    def __init__(self):
        super().__init__(name=TalagrandWeightedEvaluator.NAME, description=TalagrandWeightedEvaluator.DESCRIPTION)

    def evaluate(self, f, space, params, quad=DEFAULT_QUADRATURE):
        params = self.check_params(params)
        return eval_talagrand_general(f, space, params.get("h", "one"), params.get("T2"), quad)


class TalagrandEpsEvaluator(Evaluator):
    NAME = "talagrand_eps"
    DESCRIPTION = "Talagrand inequality with log^{1-eps} and a 1/sqrt(eps) loss; empirical constant."
    CONSTANT_SPECIFIED = False
    PARAMETERS = ("eps",)

    def __init__(self):
        super().__init__(name=TalagrandEpsEvaluator.NAME, description=TalagrandEpsEvaluator.DESCRIPTION)

    def evaluate(self, f, space, params, quad=DEFAULT_QUADRATURE):
        params = self.check_params(params)
        if "eps" not in params:
            raise DomainError(f"Evaluator '{self.name}' needs the parameter 'eps'.")
        return eval_talagrand_eps_ratio(f, space, float(params["eps"]))


class LogRatioProbeEvaluator(Evaluator):
    NAME = "log_ratio_probe"
    DESCRIPTION = "Log-ratio heat integral against the unweighted Talagrand sum; empirical constant."
    CONSTANT_SPECIFIED = False

    def __init__(self):
        super().__init__(name=LogRatioProbeEvaluator.NAME, description=LogRatioProbeEvaluator.DESCRIPTION)

    def evaluate(self, f, space, params, quad=DEFAULT_QUADRATURE):
        self.check_params(params)
        return eval_log_ratio_probe(f, space, quad)
