"""Inequality evaluators. Every sub-package holds an `evaluator_impl` module."""
