from .evaluator_impl import PoincareEvaluator, eval_poincare
