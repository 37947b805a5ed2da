import unittest

from kkltype.cube import CubeFunction
from kkltype.errors import DomainError
from kkltype.inequality_core import Evaluator, EvaluatorRegistry, default_registry, input_summary
from kkltype.normed import NormedSpace
from kkltype.reports import InequalityReport
from kkltype.zoo import dictator

BUILTIN = [
    "hypercontractivity",
    "kkl_boolean",
    "kkl_chain",
    "kkl_empirical",
    "kkl_max_influence",
    "kkl_vector",
    "log_ratio_probe",
    "metric_kkl",
    "poincare",
    "talagrand_eps",
    "talagrand_weighted",
    "type_p",
]


class ConstantEvaluator(Evaluator):
    NAME = "constant_probe"
    DESCRIPTION = "Reports lhs = rhs = 1."
    PARAMETERS = ("scale",)

    def evaluate(self, f, space, params, quad=None):
        params = self.check_params(params)
        scale = float(params.get("scale", 1.0))
        return InequalityReport(self.name, scale, scale, 1.0, input_summary(f, space))


class TestEvaluatorBase(unittest.TestCase):

    def test_names_and_parameters(self):
        """Class attributes provide the name; unknown parameters are rejected."""
        evaluator = ConstantEvaluator()
        self.assertEqual(evaluator.name, "constant_probe")
        self.assertEqual(repr(evaluator), "<Evaluator(name='constant_probe')>")
        with self.assertRaises(DomainError):
            evaluator.check_params({"p": 2})
        report = evaluator.evaluate(dictator(2), NormedSpace.scalar(), {"scale": 3})
        self.assertEqual(report.slack, 1.0)

    def test_empty_name_rejected(self):
        """An evaluator must carry a non-empty name."""
        class Nameless(ConstantEvaluator):
            NAME = ""

        with self.assertRaises(ValueError):
            Nameless()

    def test_input_summary(self):
        """None parameters are left out of the inputs block."""
        summary = input_summary(dictator(3), NormedSpace.scalar(), p=2.0, T2=None)
        self.assertEqual(summary, {"n": 3, "d": 1, "space": "l_2^1", "p": 2.0})


class TestEvaluatorRegistry(unittest.TestCase):

    def test_register_and_get(self):
        """Registered evaluators are found by name."""
        registry = EvaluatorRegistry()
        registry.register_evaluator(ConstantEvaluator())
        self.assertIsInstance(registry.get_evaluator("constant_probe"), ConstantEvaluator)
        self.assertIsNone(registry.get_evaluator("missing"))

    def test_register_rejects_other_types(self):
        """Only Evaluator instances can be registered."""
        with self.assertRaises(TypeError):
            EvaluatorRegistry().register_evaluator(object())

    def test_reregistering_warns(self):
        """Registering a name twice replaces the evaluator and logs a warning."""
        registry = EvaluatorRegistry()
        registry.register_evaluator(ConstantEvaluator())
        with self.assertLogs("kkltype.inequality_core", level="WARNING"):
            registry.register_evaluator(ConstantEvaluator())
        self.assertEqual(registry.names(), ["constant_probe"])

    def test_discovery(self):
        """Every built-in evaluator is discovered from its sub-package."""
        registry = EvaluatorRegistry()
        registry.discover_evaluators()
        self.assertEqual(registry.names(), BUILTIN)

    def test_missing_package(self):
        """Discovering from a missing package only warns."""
        registry = EvaluatorRegistry()
        with self.assertLogs("kkltype.inequality_core", level="WARNING"):
            registry.discover_evaluators("kkltype.no_such_package")
        self.assertEqual(registry.names(), [])

    def test_default_registry_is_shared(self):
        """default_registry discovers once and returns the same registry afterwards."""
        self.assertIs(default_registry(), default_registry())
        self.assertEqual(default_registry().names(), BUILTIN)

    def test_every_evaluator_runs_on_a_dictator(self):
        """Each built-in evaluator produces a report for a simple boolean function."""
        f = dictator(2)
        params = {"talagrand_eps": {"eps": 0.5}}
        for evaluator in default_registry().get_all_evaluators():
            report = evaluator.evaluate(f, NormedSpace.scalar(), params.get(evaluator.name, {}))
            self.assertEqual(report.name, evaluator.name)
            self.assertEqual(report.inputs["n"], 2)


if __name__ == '__main__':
    unittest.main()
