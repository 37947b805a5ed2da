from .evaluator_impl import (
    LogRatioProbeEvaluator,
    TalagrandEpsEvaluator,
    TalagrandWeightedEvaluator,
    eval_log_ratio_probe,
    eval_talagrand_eps_ratio,
    eval_talagrand_general,
)
