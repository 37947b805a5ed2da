import math
import unittest

from kkltype.errors import DomainError
from kkltype.evaluators.talagrand.evaluator_impl import (
    TALAGRAND_CONSTANT,
    TalagrandEpsEvaluator,
    eval_log_ratio_probe,
    eval_talagrand_eps_ratio,
    eval_talagrand_general,
)
from kkltype.normed import NormedSpace
from kkltype.reports import ReportStatus
from kkltype.weights import custom_weight
from kkltype.zoo import dictator, majority, random_vector, tribes, TribesParams
from tests.corpus import boolean_corpus, vector_corpus, zoo_corpus


class TestWeightedTalagrand(unittest.TestCase):

    def test_holds_for_builtin_weights(self):
        """The weighted inequality holds for Maj_3 and a tribes function."""
        for f in (majority(3), tribes(TribesParams(2, 3))):
            for label in ("one", "pow:0.25", "sqrt", "t-over-log:1"):
                report = eval_talagrand_general(f, NormedSpace.scalar(), label)
                self.assertTrue(report.passed, f"{label}: {report}")
                self.assertEqual(report.inputs["h"], label)

    def test_dictator_with_vanishing_weight(self):
        """h(0) = 0 for h = sqrt, so a dictator makes the right side infinite."""
        report = eval_talagrand_general(dictator(2), NormedSpace.scalar(), "sqrt")
        self.assertIn("weight_vanishes", report.flags)
        self.assertEqual(report.rhs, math.inf)

    def test_dictator_with_unit_weight(self):
        """With h = 1 the dictator gives rhs = 12."""
        report = eval_talagrand_general(dictator(2), NormedSpace.scalar(), "one")
        self.assertAlmostEqual(report.rhs, TALAGRAND_CONSTANT, delta=1e-7)
        self.assertAlmostEqual(report.lhs, 1.0)

    def test_vector_valued_in_l4(self):
        """Targets with a built-in type-2 bound need no explicit T2."""
        report = eval_talagrand_general(random_vector(4, 2, seed=7), NormedSpace(d=2, q=4.0), "one")
        self.assertEqual(report.inputs["T2"], math.sqrt(3.0))
        self.assertTrue(report.passed)
        with self.assertRaises(DomainError):
            eval_talagrand_general(random_vector(4, 2, seed=7), NormedSpace(d=2, q=1.0))

    def test_custom_weight(self):
        """A weight object can be passed directly."""
        weight = custom_weight(lambda t: 1.0 + 0.0 * t, "flat")
        report = eval_talagrand_general(majority(3), NormedSpace.scalar(), weight)
        self.assertEqual(report.inputs["h"], "flat")


class TestEpsilonForm(unittest.TestCase):

    def test_relation_to_weighted_form(self):
        """With h(t) = t^{1-eps} the weighted rhs is exactly 12 T2 times the eps-form rhs."""
        f = majority(3)
        weighted = eval_talagrand_general(f, NormedSpace.scalar(), "sqrt")
        eps_form = eval_talagrand_eps_ratio(f, NormedSpace.scalar(), 0.5)
        self.assertAlmostEqual(weighted.rhs / eps_form.rhs, TALAGRAND_CONSTANT, delta=1e-7)
        self.assertEqual(eps_form.status, ReportStatus.EMPIRICAL)
        self.assertAlmostEqual(eps_form.extras["empirical_constant"], eps_form.lhs / eps_form.rhs)

    def test_eps_range(self):
        """eps must lie strictly between 0 and 1, and the evaluator requires it."""
        with self.assertRaises(DomainError):
            eval_talagrand_eps_ratio(majority(3), NormedSpace.scalar(), 1.0)
        with self.assertRaises(DomainError):
            TalagrandEpsEvaluator().evaluate(majority(3), NormedSpace.scalar(), {})


class TestLogRatioProbe(unittest.TestCase):

    def test_majority(self):
        """The chain bound built on the log-ratio integral dominates ||f - Ef||_2."""
        report = eval_log_ratio_probe(majority(3), NormedSpace.scalar())
        self.assertEqual(report.status, ReportStatus.EMPIRICAL)
        self.assertGreaterEqual(report.extras["variance_bound"], report.extras["variance_root"])
        self.assertEqual(report.flags, ())

    def test_dictator(self):
        """A dictator has log-ratio zero, so the unweighted sum is infinite."""
        report = eval_log_ratio_probe(dictator(1), NormedSpace.scalar())
        self.assertIn("log_ratio_vanishes", report.flags)
        self.assertAlmostEqual(report.lhs, math.pi / 2.0, delta=1e-8)


class TestWeightedTalagrandCorpus(unittest.TestCase):

    WEIGHTS = ("one", "sqrt", "pow:0.9", "t-over-log:0.5")

    def assert_all_pass(self, functions, make_space):
        for label in self.WEIGHTS:
            for f in functions:
                report = eval_talagrand_general(f, make_space(f), label)
                self.assertTrue(report.passed, f"{label}: {report}")

    def test_zoo(self):
        """The catalogue passes for h = 1, sqrt t, t^0.9 and t / log^1.5(2 + t)."""
        self.assert_all_pass(zoo_corpus(), lambda f: NormedSpace(d=f.d))

    def test_random_boolean_functions(self):
        """200 random boolean functions pass for every weight."""
        self.assert_all_pass(boolean_corpus(), lambda f: NormedSpace.scalar())

    def test_random_vector_functions(self):
        """50 random vector-valued functions pass in l_2^d and in l_4^d."""
        self.assert_all_pass(vector_corpus(), lambda f: NormedSpace(d=f.d))
        self.assert_all_pass(vector_corpus(), lambda f: NormedSpace(d=f.d, q=4.0))


if __name__ == '__main__':
    unittest.main()
