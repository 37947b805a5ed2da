"""
Logarithmic (KKL-type) improvements of the Poincare inequality: the vector-valued bound
with the type-2 constant, its type-p version, the boolean forms with explicit constants,
the metric form and the intermediate chain bound.
"""
import math
from typing import Any, Mapping, NamedTuple, Optional

import numpy as np

from kkltype.cube import CubeFunction
from kkltype.errors import DomainError, NonBooleanError
from kkltype.inequality_core import Evaluator, input_summary
from kkltype.kernels import CHAIN_CONSTANT, prefinal_chain_bound
from kkltype.log_config import get_logger
from kkltype.normed import (
    EXACT_ENERGY_LIMIT,
    FiniteMetricSpace,
    NormedSpace,
    boolean_to_indices,
    derivative_norms,
    empirical_type_ratio,
    influences,
    lp_norm,
    metric_energy_terms,
    signed_sums,
    variance,
    variance_and_energy,
)
from kkltype.quadrature import DEFAULT_QUADRATURE, QuadratureSpec
from kkltype.reports import PASS_GRACE, DerivativeBounds, InequalityReport

logger = get_logger(__name__)

KKL_CONSTANT = 2.0 * math.e * math.sqrt(2.0 * math.pi)
BOOLEAN_CONSTANT = 4.0
MAX_INFLUENCE_CONSTANT = 0.2


def _log_e_over(ratio: float) -> float:
    """log(e / ratio), +inf at ratio = 0."""
    return math.inf if ratio == 0 else 1.0 - math.log(ratio)


def measured_bounds(f: CubeFunction, space: NormedSpace, p: float = 2.0) -> Optional[DerivativeBounds]:
    """a_j = ||D_j f||_1 and b_j = ||D_j f||_p; None for a constant function."""
    return DerivativeBounds.from_norms(derivative_norms(f, 1.0, space), derivative_norms(f, p, space))


def _coerce_bounds(raw) -> Optional[DerivativeBounds]:
    if raw is None or isinstance(raw, DerivativeBounds):
        return raw
    return DerivativeBounds.from_dict(raw)


def _check_supplied(f: CubeFunction, space: NormedSpace, p: float, bounds: DerivativeBounds) -> None:
    if bounds.size != f.n:
        raise DomainError(f"Derivative bounds cover {bounds.size} coordinates, the function has {f.n}.")
    l1 = derivative_norms(f, 1.0, space)
    lp = derivative_norms(f, p, space)
    grace = 1.0 + PASS_GRACE
    if np.any(l1 > np.asarray(bounds.a) * grace) or np.any(lp > np.asarray(bounds.b) * grace):
        raise DomainError("Supplied bounds must dominate ||D_j f||_1 and ||D_j f||_p for every j.")


def _logarithmic_bound(name: str, f: CubeFunction, space: NormedSpace, p: float, T: float,
                       bounds: Optional[DerivativeBounds], **summary: Any) -> InequalityReport:
    lhs = lp_norm(f.centered(), p, space)
    if bounds is None:
        bounds = measured_bounds(f, space, p)
    else:
        _check_supplied(f, space, p, bounds)
        summary["bounds"] = bounds.source

    inputs = input_summary(f, space, p=p, **summary)
    constant = KKL_CONSTANT * T
    if bounds is None:
        return InequalityReport(name, lhs, 0.0, constant, inputs, flags=("constant_function",))

    ratio = bounds.max_ratio()
    log_term = _log_e_over(ratio)
    scale = bounds.b_power_sum(p) ** (1.0 / p)
    rhs = constant * scale / math.sqrt(log_term)
    extras = {
        "max_ratio": ratio,
        "printed_form_rhs": constant * scale / log_term,
    }
    return InequalityReport(name, lhs, rhs, constant, inputs, extras=extras)


def _type2(space: NormedSpace, T2: Optional[float]) -> float:
    T2 = space.type2_bound if T2 is None else float(T2)
    if T2 is None:
        raise DomainError(f"No type-2 bound is known for {space.describe()}; supply T2.")
    if not T2 >= 1:
        raise DomainError(f"Type-2 bound must be >= 1, got {T2}.")
    return T2


def eval_kkl_vector(f: CubeFunction, space: NormedSpace, T2: Optional[float] = None,
                    bounds: Optional[DerivativeBounds] = None) -> InequalityReport:
    """
    ||f - Ef||_2 <= 2e sqrt(2 pi) T2 (sum b_k^2)^{1/2} / sqrt(log(e / max_j a_j/b_j)).
    The extras also carry the form with an un-rooted logarithm and, for n <= 13, the
    metric form: E||f(eps) - f(eps')||^2 against the squared constant times
    sum_j E||f(eps) - f(eps with j flipped)||^2 / log(e / max ratio).
    """
    T2 = _type2(space, T2)
    report = _logarithmic_bound(KKLVectorEvaluator.NAME, f, space, 2.0, T2, bounds, T2=T2)
    if f.n <= EXACT_ENERGY_LIMIT and "max_ratio" in report.extras:
        b = measured_bounds(f, space, 2.0) if bounds is None else bounds
        energy = variance_and_energy(f, space).energy
        edge_sum = 4.0 * b.b_power_sum(2.0)
        extras = dict(report.extras)
        extras["metric_lhs"] = energy
        extras["metric_rhs"] = report.constant_used ** 2 * edge_sum / _log_e_over(report.extras["max_ratio"])
        report = InequalityReport(report.name, report.lhs, report.rhs, report.constant_used,
                                  report.inputs, flags=report.flags, extras=extras)
    return report


def eval_type_p(f: CubeFunction, space: NormedSpace, p: float, Tp: Optional[float] = None,
                bounds: Optional[DerivativeBounds] = None) -> InequalityReport:
    """||f - Ef||_p <= 2e sqrt(2 pi) T_p (sum b_j^p)^{1/p} / sqrt(log(e / max a_j/b_j)), 1 <= p <= 2."""
    if not 1 <= p <= 2:
        raise DomainError(f"Type exponent p must lie in [1, 2], got {p}.")
    Tp = space.type_bound(p) if Tp is None else float(Tp)
    if Tp is None:
        raise DomainError(f"No type-{p:g} bound is known for {space.describe()}; supply Tp.")
    if not Tp >= 1:
        raise DomainError(f"Type-{p:g} bound must be >= 1, got {Tp}.")
    return _logarithmic_bound(TypePEvaluator.NAME, f, space, float(p), Tp, bounds, Tp=Tp)


def _boolean_profile(f: CubeFunction):
    if not f.is_boolean:
        raise NonBooleanError("This inequality is stated for boolean functions.")
    return variance(f, NormedSpace.scalar()), influences(f)


def eval_kkl_boolean(f: CubeFunction) -> InequalityReport:
    """Var(f) <= 4 / log(e / max_k Inf_k) * sum_j Inf_j for boolean f."""
    var, infl = _boolean_profile(f)
    top = float(np.max(infl))
    rhs = 0.0 if top == 0 else BOOLEAN_CONSTANT * float(np.sum(infl)) / _log_e_over(top)
    return InequalityReport(
        name=KKLBooleanEvaluator.NAME,
        lhs=var,
        rhs=rhs,
        constant_used=BOOLEAN_CONSTANT,
        inputs=input_summary(f, NormedSpace.scalar()),
        extras={"max_influence": top, "total_influence": float(np.sum(infl))},
    )


def eval_kkl_max_influence(f: CubeFunction) -> InequalityReport:
    """max_j Inf_j >= (1/5) Var(f) log(n) / n for boolean f."""
    var, infl = _boolean_profile(f)
    lhs = MAX_INFLUENCE_CONSTANT * var * math.log(f.n) / f.n
    return InequalityReport(
        name=KKLMaxInfluenceEvaluator.NAME,
        lhs=lhs,
        rhs=float(np.max(infl)),
        constant_used=MAX_INFLUENCE_CONSTANT,
        inputs=input_summary(f, NormedSpace.scalar()),
    )


def eval_kkl_empirical(f: CubeFunction, space: NormedSpace) -> InequalityReport:
    """
    Empirical constant K in E||f - Ef||^2 <= K / log(e / max_k ||D_k f||_1/||D_k f||_2)
    * sum_j ||D_j f||_2^2; reported, not judged.
    """
    var2 = variance(f, space)
    bounds = measured_bounds(f, space)
    rhs = 0.0 if bounds is None else bounds.b_power_sum(2.0) / _log_e_over(bounds.max_ratio())
    empirical = var2 / rhs if rhs > 0 else 0.0
    return InequalityReport(
        name=KKLEmpiricalEvaluator.NAME,
        lhs=var2,
        rhs=rhs,
        constant_used=1.0,
        inputs=input_summary(f, space),
        constant_specified=False,
        extras={"empirical_constant": empirical},
    )


def _coerce_metric(raw) -> FiniteMetricSpace:
    if isinstance(raw, FiniteMetricSpace):
        return raw
    if raw is None:
        return FiniteMetricSpace([[0.0, 1.0], [1.0, 0.0]])
    return FiniteMetricSpace.from_dict(raw)


def eval_metric_kkl(f: CubeFunction, metric: Optional[FiniteMetricSpace] = None,
                    T: Optional[float] = None) -> InequalityReport:
    """
    E d(f(eps), f(eps'))^2 <= T^2 / log(e / max_k ratio_k) * sum_j E d(f(eps), f(eps with j flipped))^2.
    Boolean functions are mapped onto a metric's first two points (by default the
    two-point metric with distance 1). Without T the best constant is reported.
    """
    metric = _coerce_metric(metric)
    indexed = boolean_to_indices(f) if f.is_boolean else f
    terms = metric_energy_terms(indexed, metric)
    active = terms.edge_terms > 0
    if np.any(active):
        base = float(np.sum(terms.edge_terms)) / _log_e_over(float(np.max(terms.ratio_terms)))
    else:
        base = 0.0
    empirical = math.sqrt(terms.lhs / base) if base > 0 else 0.0
    summary = input_summary(f, NormedSpace.scalar(), metric_size=metric.size, T=T)
    summary.pop("space")
    if T is None:
        return InequalityReport(MetricKKLEvaluator.NAME, terms.lhs, base, 1.0, summary,
                                constant_specified=False, extras={"empirical_T": empirical})
    constant = float(T) ** 2
    return InequalityReport(MetricKKLEvaluator.NAME, terms.lhs, constant * base, constant, summary,
                            extras={"empirical_T": empirical})


class KKLBracket(NamedTuple):
    lower: float        # empirical KKL-type constant of the linear function
    upper: float        # 2e sqrt(2 pi) T2
    type_ratio: float   # empirical type-2 ratio of the same vectors


def linear_kkl_bracket(xs, space: NormedSpace, T2: Optional[float] = None) -> KKLBracket:
    """
    Brackets the KKL-type constant using f = sum_j eps_j x_j: its metric-form constant is
    a lower bound (and is at least half the type-2 ratio), 2e sqrt(2 pi) T2 the upper one.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if xs.shape[0] > EXACT_ENERGY_LIMIT:
        raise DomainError(f"Linear brackets are computed exactly for at most {EXACT_ENERGY_LIMIT} vectors.")
    ratio = empirical_type_ratio(xs, 2.0, space).ratio
    f = CubeFunction(signed_sums(xs), boolean=False)
    energy = variance_and_energy(f, space).energy
    edge_sum = 4.0 * float(np.sum(space.norms(xs) ** 2))
    upper = KKL_CONSTANT * _type2(space, T2)
    return KKLBracket(math.sqrt(energy / edge_sum), upper, ratio)


def eval_kkl_chain(f: CubeFunction, space: NormedSpace, T2: Optional[float] = None,
                   quad: QuadratureSpec = DEFAULT_QUADRATURE) -> InequalityReport:
    """||f - Ef||_2 <= 2^{3/2} T2 int_0^inf (sum_j ||D_j P_t f||_2^2)^{1/2} dt / sqrt(e^{2t} - 1)."""
    T2 = _type2(space, T2)
    lhs = lp_norm(f.centered(), 2.0, space)
    rhs = prefinal_chain_bound(f, space, T2, quad)
    final = eval_kkl_vector(f, space, T2)
    return InequalityReport(
        name=KKLChainEvaluator.NAME,
        lhs=lhs,
        rhs=rhs,
        constant_used=CHAIN_CONSTANT * T2,
        inputs=input_summary(f, space, T2=T2, rel_tol=quad.rel_tol),
        extras={"final_rhs": final.rhs},
    )


class KKLVectorEvaluator(Evaluator):
    NAME = "kkl_vector"
    DESCRIPTION = "Logarithmic Poincare inequality for type-2 targets with constant 2e sqrt(2 pi) T2."
    PARAMETERS = ("T2", "bounds")

    def __init__(self):
        super().__init__(name=KKLVectorEvaluator.NAME, description=KKLVectorEvaluator.DESCRIPTION)

    def evaluate(self, f, space, params, quad=DEFAULT_QUADRATURE):
        params = self.check_params(params)
        return eval_kkl_vector(f, space, params.get("T2"), _coerce_bounds(params.get("bounds")))


class TypePEvaluator(Evaluator):
    NAME = "type_p"
    DESCRIPTION = "L^p logarithmic Poincare inequality for type-p targets, 1 <= p <= 2."
    PARAMETERS = ("p", "Tp", "bounds")

    def __init__(self):
        super().__init__(name=TypePEvaluator.NAME, description=TypePEvaluator.DESCRIPTION)

    def evaluate(self, f, space, params, quad=DEFAULT_QUADRATURE):
        params = self.check_params(params)
        return eval_type_p(f, space, float(params.get("p", 2.0)), params.get("Tp"),
                           _coerce_bounds(params.get("bounds")))


class KKLBooleanEvaluator(Evaluator):
    NAME = "kkl_boolean"
    DESCRIPTION = "Boolean KKL inequality with constant 4."

    def __init__(self):
        super().__init__(name=KKLBooleanEvaluator.NAME, description=KKLBooleanEvaluator.DESCRIPTION)

    def evaluate(self, f, space, params, quad=DEFAULT_QUADRATURE):
        self.check_params(params)
        return eval_kkl_boolean(f)


class KKLMaxInfluenceEvaluator(Evaluator):
    NAME = "kkl_max_influence"
    DESCRIPTION = "Some coordinate has influence at least Var(f) log(n) / (5n)."

    def __init__(self):
        super().__init__(name=KKLMaxInfluenceEvaluator.NAME, description=KKLMaxInfluenceEvaluator.DESCRIPTION)

    def evaluate(self, f, space, params, quad=DEFAULT_QUADRATURE):
        self.check_params(params)
        return eval_kkl_max_influence(f)


class KKLEmpiricalEvaluator(Evaluator):
    NAME = "kkl_empirical"
    DESCRIPTION = "Empirical constant of the real-valued logarithmic Poincare inequality."
    CONSTANT_SPECIFIED = False

    def __init__(self):
        super().__init__(name=KKLEmpiricalEvaluator.NAME, description=KKLEmpiricalEvaluator.DESCRIPTION)

    def evaluate(self, f, space, params, quad=DEFAULT_QUADRATURE):
        self.check_params(params)
        return eval_kkl_empirical(f, space)


class MetricKKLEvaluator(Evaluator):
    NAME = "metric_kkl"
    DESCRIPTION = "Metric KKL inequality on a finite metric target; empirical unless T is given."
    PARAMETERS = ("metric", "T")

    def __init__(self):
        super().__init__(name=MetricKKLEvaluator.NAME, description=MetricKKLEvaluator.DESCRIPTION)

    def evaluate(self, f, space, params, quad=DEFAULT_QUADRATURE):
        params = self.check_params(params)
        return eval_metric_kkl(f, _coerce_metric(params.get("metric")), params.get("T"))


class KKLChainEvaluator(Evaluator):
    NAME = "kkl_chain"
    DESCRIPTION = "Intermediate heat-semigroup chain bound with constant 2^{3/2} T2."
    PARAMETERS = ("T2",)

    def __init__(self):
        super().__init__(name=KKLChainEvaluator.NAME, description=KKLChainEvaluator.DESCRIPTION)

    def evaluate(self, f, space, params, quad=DEFAULT_QUADRATURE):
        params = self.check_params(params)
        return eval_kkl_chain(f, space, params.get("T2"), quad)
