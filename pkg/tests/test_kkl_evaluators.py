import math
import unittest

import numpy as np

from kkltype.cube import CubeFunction
from kkltype.errors import DomainError, NonBooleanError
from kkltype.evaluators.kkl.evaluator_impl import (
    KKL_CONSTANT,
    eval_kkl_boolean,
    eval_kkl_chain,
    eval_kkl_empirical,
    eval_kkl_max_influence,
    eval_kkl_vector,
    eval_metric_kkl,
    eval_type_p,
    linear_kkl_bracket,
)
from kkltype.normed import FiniteMetricSpace, NormedSpace
from kkltype.reports import DerivativeBounds, ReportStatus
from kkltype.zoo import dictator, linear_function, majority, parity, random_vector, tribes, TribesParams
from tests.corpus import boolean_corpus, vector_corpus, zoo_corpus


class TestKKLVector(unittest.TestCase):

    def test_constant_value(self):
        """2e sqrt(2 pi) is about 13.627."""
        self.assertAlmostEqual(KKL_CONSTANT, 13.6274, delta=1e-3)

    def test_identity_in_l2(self):
        """sum_j eps_j e_j in l_2^3: lhs sqrt(3), every ratio 1, slack equal to the constant."""
        report = eval_kkl_vector(linear_function(np.eye(3)), NormedSpace(d=3))
        self.assertAlmostEqual(report.lhs, math.sqrt(3.0), places=12)
        self.assertAlmostEqual(report.slack, KKL_CONSTANT, places=9)
        self.assertEqual(report.status, ReportStatus.PASS)
        self.assertAlmostEqual(report.extras["metric_lhs"], 6.0, places=12)
        self.assertAlmostEqual(report.extras["metric_rhs"], KKL_CONSTANT ** 2 * 12.0, places=6)

    def test_holds_for_random_vectors(self):
        """The inequality holds for random vector-valued functions in l_4."""
        space = NormedSpace(d=3, q=4.0)
        for seed in range(5):
            self.assertTrue(eval_kkl_vector(random_vector(5, 3, seed), space).passed)

    def test_space_without_type2(self):
        """l_1 needs an explicit T2."""
        f = random_vector(3, 2, seed=1)
        with self.assertRaises(DomainError):
            eval_kkl_vector(f, NormedSpace(d=2, q=1.0))
        report = eval_kkl_vector(f, NormedSpace(d=2, q=1.0), T2=2.0)
        self.assertEqual(report.inputs["T2"], 2.0)

    def test_supplied_bounds(self):
        """Supplied bounds are checked against the measured norms and enter the rhs."""
        f = dictator(1)
        report = eval_kkl_vector(f, NormedSpace.scalar(), bounds=DerivativeBounds((1.0,), (2.0,)))
        self.assertAlmostEqual(report.rhs, KKL_CONSTANT * 2.0 / math.sqrt(1.0 + math.log(2.0)), places=9)
        self.assertEqual(report.inputs["bounds"], "supplied")
        with self.assertRaises(DomainError):
            eval_kkl_vector(f, NormedSpace.scalar(), bounds=DerivativeBounds((0.5,), (0.5,)))
        with self.assertRaises(DomainError):
            eval_kkl_vector(f, NormedSpace.scalar(), bounds=DerivativeBounds((1.0, 1.0), (1.0, 1.0)))

    def test_constant_function(self):
        """A constant function is flagged and passes with infinite slack."""
        report = eval_kkl_vector(CubeFunction([1.0, 1.0]), NormedSpace.scalar())
        self.assertEqual(report.flags, ("constant_function",))
        self.assertEqual(report.slack, math.inf)

    def test_type_p_at_two_matches_vector_form(self):
        """The type-2 instance of the L^p form has the same right side."""
        f = random_vector(4, 2, seed=3)
        space = NormedSpace(d=2)
        self.assertAlmostEqual(eval_type_p(f, space, 2.0).rhs, eval_kkl_vector(f, space).rhs, places=12)

    def test_type_p_bounds(self):
        """p outside [1, 2] or an unknown T_p is rejected; T_1 = 1 is always available."""
        f = random_vector(3, 2, seed=2)
        space = NormedSpace(d=2, q=1.0)
        with self.assertRaises(DomainError):
            eval_type_p(f, space, 2.5)
        with self.assertRaises(DomainError):
            eval_type_p(f, space, 1.5)
        self.assertTrue(eval_type_p(f, space, 1.0).passed)


class TestBooleanForms(unittest.TestCase):

    def test_parity(self):
        """eps_1 eps_2: Var 1 against 4 * 2 / log(e) = 8."""
        self.assertAlmostEqual(eval_kkl_boolean(parity(2)).slack, 8.0)

    def test_dictator(self):
        """A dictator on one variable has slack 4."""
        self.assertAlmostEqual(eval_kkl_boolean(dictator(1)).slack, 4.0)

    def test_majority(self):
        """Maj_3: Var 1 against 4 * 3/2 / (1 + log 2)."""
        report = eval_kkl_boolean(majority(3))
        self.assertAlmostEqual(report.rhs, 6.0 / (1.0 + math.log(2.0)), places=12)
        self.assertAlmostEqual(report.extras["total_influence"], 1.5)

    def test_tribes(self):
        """Tribes satisfy the boolean inequality."""
        self.assertTrue(eval_kkl_boolean(tribes(TribesParams(3, 4))).passed)

    def test_non_boolean(self):
        """Vector-valued input is refused."""
        with self.assertRaises(NonBooleanError):
            eval_kkl_boolean(random_vector(2, 1, seed=0))

    def test_max_influence(self):
        """max_j Inf_j >= Var log(n) / (5n)."""
        report = eval_kkl_max_influence(majority(3))
        self.assertAlmostEqual(report.lhs, 0.2 * math.log(3.0) / 3.0, places=14)
        self.assertAlmostEqual(report.rhs, 0.5)
        self.assertTrue(report.passed)
        one = eval_kkl_max_influence(dictator(1))
        self.assertEqual(one.lhs, 0.0)
        self.assertEqual(one.slack, math.inf)


class TestEmpiricalForms(unittest.TestCase):

    def test_kkl_empirical(self):
        """The empirical constant of a one-variable dictator is 1."""
        report = eval_kkl_empirical(dictator(1), NormedSpace.scalar())
        self.assertEqual(report.status, ReportStatus.EMPIRICAL)
        self.assertAlmostEqual(report.extras["empirical_constant"], 1.0)

    def test_metric_dictator(self):
        """The two-point metric: E d^2 = 1/2 and the best T is sqrt(1/2)."""
        report = eval_metric_kkl(dictator(1))
        self.assertAlmostEqual(report.lhs, 0.5)
        self.assertAlmostEqual(report.extras["empirical_T"], math.sqrt(0.5))
        self.assertEqual(report.status, ReportStatus.EMPIRICAL)
        judged = eval_metric_kkl(dictator(1), T=1.0)
        self.assertEqual(judged.status, ReportStatus.PASS)

    def test_metric_on_point_set(self):
        """Index-valued functions map into a larger metric."""
        metric = FiniteMetricSpace.from_points([[0.0], [1.0], [3.0]], NormedSpace(d=1))
        f = CubeFunction([0.0, 1.0, 2.0, 1.0], boolean=False)
        report = eval_metric_kkl(f, metric)
        self.assertEqual(report.inputs["metric_size"], 3)
        self.assertGreater(report.extras["empirical_T"], 0.0)

    def test_linear_bracket(self):
        """Orthonormal vectors give lower constant sqrt(1/2) and type ratio 1."""
        bracket = linear_kkl_bracket(np.eye(2), NormedSpace(d=2))
        self.assertAlmostEqual(bracket.lower, math.sqrt(0.5), places=12)
        self.assertAlmostEqual(bracket.type_ratio, 1.0, places=12)
        self.assertAlmostEqual(bracket.upper, KKL_CONSTANT)
        self.assertGreaterEqual(bracket.lower, 0.5 * bracket.type_ratio - 1e-12)

    def test_chain_bound(self):
        """The intermediate chain bound holds and sits below the final one for Maj_3."""
        report = eval_kkl_chain(majority(3), NormedSpace.scalar())
        self.assertTrue(report.passed)
        self.assertLessEqual(report.rhs, report.extras["final_rhs"])


class TestCorpus(unittest.TestCase):

    def test_vector_form_on_zoo(self):
        """Every catalogue function passes, each in the Euclidean space of its dimension."""
        for f in zoo_corpus():
            report = eval_kkl_vector(f, NormedSpace(d=f.d))
            self.assertTrue(report.passed, report)
            self.assertGreaterEqual(report.slack, 1.0)

    def test_vector_form_on_random_boolean_functions(self):
        """200 random boolean functions with n <= 10 pass."""
        for f in boolean_corpus():
            self.assertTrue(eval_kkl_vector(f, NormedSpace.scalar()).passed)

    def test_vector_form_in_l2_and_l4(self):
        """50 random vector-valued functions pass in l_2^d (T2 = 1) and l_4^d (T2 = sqrt 3)."""
        for f in vector_corpus():
            euclidean = eval_kkl_vector(f, NormedSpace(d=f.d))
            quartic = eval_kkl_vector(f, NormedSpace(d=f.d, q=4.0))
            self.assertEqual(euclidean.inputs["T2"], 1.0)
            self.assertAlmostEqual(quartic.inputs["T2"], math.sqrt(3.0))
            self.assertTrue(euclidean.passed, euclidean)
            self.assertTrue(quartic.passed, quartic)

    def test_type_p_on_scalar_targets(self):
        """p in {1, 1.25, 1.5, 2} with T_p = 1 passes on the boolean corpus."""
        scalar = NormedSpace.scalar()
        for f in boolean_corpus():
            for p in (1.0, 1.25, 1.5, 2.0):
                self.assertTrue(eval_type_p(f, scalar, p, Tp=1.0).passed, (f, p))

    def test_type_p_at_two_agrees_with_vector_form(self):
        """The p = 2 instance matches the type-2 evaluator to 1e-12 relative."""
        scalar = NormedSpace.scalar()
        for f in boolean_corpus()[:50]:
            vector_form = eval_kkl_vector(f, scalar)
            type_two = eval_type_p(f, scalar, 2.0, Tp=1.0)
            self.assertLessEqual(abs(type_two.rhs - vector_form.rhs), 1e-12 * max(vector_form.rhs, 1e-300))
            self.assertLessEqual(abs(type_two.lhs - vector_form.lhs), 1e-12 * max(vector_form.lhs, 1e-300))

    def test_hilbert_targets_have_unit_type_bounds(self):
        """A scalar target needs no supplied T_p for p in [1, 2]."""
        f = majority(5)
        for p in (1.25, 1.5, 1.75):
            report = eval_type_p(f, NormedSpace.scalar(), p)
            self.assertEqual(report.inputs["Tp"], 1.0)
            self.assertTrue(report.passed)


if __name__ == '__main__':
    unittest.main()
