from .evaluator_impl import (
    KKLBooleanEvaluator,
    KKLChainEvaluator,
    KKLEmpiricalEvaluator,
    KKLMaxInfluenceEvaluator,
    KKLVectorEvaluator,
    MetricKKLEvaluator,
    TypePEvaluator,
    eval_kkl_boolean,
    eval_kkl_chain,
    eval_kkl_empirical,
    eval_kkl_max_influence,
    eval_kkl_vector,
    eval_metric_kkl,
    eval_type_p,
    linear_kkl_bracket,
)
