from .evaluator_impl import HypercontractivityEvaluator, check_hypercontractivity, in_admissible_region
