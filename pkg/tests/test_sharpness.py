import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import erf

from kkltype.errors import DomainError
from kkltype.reports import ReportStatus
from kkltype.sharpness import (
    DIRECT_LEVEL_LIMIT,
    MIXTURE_UPPER_CONSTANT,
    DiscreteRandomVariable,
    check_mixture_lower_bound,
    check_mixture_upper_bound,
    counterexample_levels,
    counterexample_lhs,
    counterexample_ratio,
    counterexample_report,
    counterexample_rhs,
    counterexample_sweep,
    extremal_mixture,
    log_sum_exp,
    mixture_dyadic_bound,
    mixture_integral,
    mixture_sweep,
    random_mixture,
)
from kkltype.weights import custom_weight


class TestDiscreteRandomVariable(unittest.TestCase):

    def test_log_sum_exp(self):
        """Huge terms do not overflow and an empty sum is refused."""
        self.assertAlmostEqual(log_sum_exp([1000.0, 1000.0]), 1000.0 + math.log(2.0))
        with self.assertRaises(DomainError):
            log_sum_exp([])

    def test_validation(self):
        """Atoms must lie in (0, 1] and probabilities must sum to one."""
        with self.assertRaises(DomainError):
            DiscreteRandomVariable([0.5], probs=[1.0])
        with self.assertRaises(DomainError):
            DiscreteRandomVariable([-1.0, -2.0], probs=[0.5, 0.6])
        with self.assertRaises(DomainError):
            DiscreteRandomVariable([-1.0], probs=[1.0], log_probs=[0.0])
        with self.assertRaises(DomainError):
            DiscreteRandomVariable([-math.inf], probs=[1.0])

    def test_deep_atoms_are_kept_in_log_form(self):
        """An atom at exp(-4^20) is representable through its logarithm."""
        X = DiscreteRandomVariable.uniform([-(4.0 ** 20), -1.0])
        self.assertEqual(X.size, 2)
        np.testing.assert_allclose(X.probs, [0.5, 0.5])
        self.assertEqual(float(X.y_values()[0]), 2.0 ** 20)

    def test_dyadic_masses(self):
        """Y = 1 sits on level 0 and Y = 2 on level 1; Y < 1 is on no level."""
        np.testing.assert_allclose(DiscreteRandomVariable.point_mass(-1.0).dyadic_masses(), [1.0])
        np.testing.assert_allclose(DiscreteRandomVariable.point_mass(-4.0).dyadic_masses(), [0.0, 1.0])
        self.assertEqual(DiscreteRandomVariable.point_mass(-0.25).dyadic_masses().size, 0)

    def test_random_mixture_is_seeded(self):
        """The same seed gives the same variable; odd seeds pin an atom at X = 1."""
        a, b = random_mixture(6, seed=3), random_mixture(6, seed=3)
        np.testing.assert_array_equal(a.log_atoms, b.log_atoms)
        self.assertEqual(float(a.log_atoms[0]), 0.0)
        self.assertAlmostEqual(float(np.sum(random_mixture(6, seed=4).probs)), 1.0, places=12)


class TestMixtureBounds(unittest.TestCase):

    def test_point_mass_integral(self):
        """X = e^{-1} and g = 1: int_0^1 e^{-s^2/2} ds = sqrt(pi/2) erf(1/sqrt 2)."""
        expected = math.sqrt(math.pi / 2.0) * float(erf(1.0 / math.sqrt(2.0)))
        X = DiscreteRandomVariable.point_mass(-1.0)
        self.assertAlmostEqual(mixture_integral(X, "one"), expected, delta=1e-9)
        self.assertAlmostEqual(mixture_integral(X, "one", mode="direct"), expected, delta=1e-9)
        self.assertAlmostEqual(mixture_integral(DiscreteRandomVariable.point_mass(0.0), "one"), 1.0, delta=1e-12)
        self.assertEqual(mixture_integral(DiscreteRandomVariable.point_mass(0.0), "sqrt"), 0.0)

    def test_unknown_mode(self):
        """Only the log and direct modes exist."""
        with self.assertRaises(DomainError):
            mixture_integral(DiscreteRandomVariable.point_mass(-1.0), "one", mode="fast")

    def test_upper_bound_report(self):
        """The upper bound for g = 1 is (sqrt 2 + 8 sqrt pi) sqrt(1/2)."""
        report = check_mixture_upper_bound(DiscreteRandomVariable.point_mass(-1.0), "one")
        self.assertAlmostEqual(report.rhs, MIXTURE_UPPER_CONSTANT * math.sqrt(0.5), delta=1e-8)
        self.assertAlmostEqual(report.rhs, 11.0266, delta=1e-3)
        self.assertEqual(report.status, ReportStatus.PASS)
        self.assertGreaterEqual(report.extras["dyadic_bound"], report.lhs)

    @settings(deadline=None, max_examples=1000)
    @given(st.integers(min_value=0, max_value=10 ** 6))
    def test_dyadic_bound_sits_between(self, seed):
        """For random mixtures and g in {1, y^{1/2}, y}: integral <= dyadic bound <= upper bound."""
        X = random_mixture(8, seed)
        for label in ("one", "pow:0.25", "sqrt"):
            report = check_mixture_upper_bound(X, label)
            self.assertLessEqual(report.lhs, report.extras["dyadic_bound"] * (1.0 + 1e-9), label)
            self.assertLessEqual(report.extras["dyadic_bound"], report.rhs, label)

    def test_dyadic_bound_of_point_mass_at_one(self):
        """X = 1 has no occupied level, leaving g(1)^{1/2}."""
        self.assertEqual(mixture_dyadic_bound(DiscreteRandomVariable.point_mass(0.0), "one"), 1.0)

    def test_extremal_masses(self):
        """Masses proportional to g(2^k) 4^{-k} over the first K levels."""
        np.testing.assert_allclose(extremal_mixture("one", 2).probs, [0.8, 0.2])
        np.testing.assert_allclose(extremal_mixture("sqrt", 3).probs, [4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0])
        np.testing.assert_allclose(extremal_mixture(custom_weight(lambda t: t, "linear"), 1).probs, [1.0])
        np.testing.assert_array_equal(extremal_mixture("one", 2).log_atoms, [-4.0, -16.0])
        with self.assertRaises(DomainError):
            extremal_mixture("one", 0)

    def test_lower_bound_holds(self):
        """The extremal mixture attains the converse bound."""
        report = check_mixture_lower_bound("sqrt", 4)
        self.assertTrue(report.lower_bound)
        self.assertTrue(report.passed)
        self.assertEqual(report.inputs, {"K": 4, "weight": "sqrt"})

    def test_lower_bound_over_weights_and_levels(self):
        """g in {1, y^{1/2}, y, y / log^2(2 + y)} and K = 2..8: both bounds hold on the extremal mixture."""
        weights = ("one", "pow:0.25", "sqrt",
                   custom_weight(lambda t: np.sqrt(t) / np.log(2.0 + np.sqrt(t)) ** 2, "y-over-log2"))
        for weight in weights:
            for K in range(2, 9):
                lower = check_mixture_lower_bound(weight, K)
                self.assertTrue(lower.passed, lower)
                self.assertGreater(lower.lhs, 0.0)
                upper = check_mixture_upper_bound(extremal_mixture(weight, K), weight)
                self.assertTrue(upper.passed, upper)

    def test_mixture_sweep(self):
        """Each weight and level yields a lower and an upper report, all passing."""
        reports = mixture_sweep(weights=("one", "pow:0.25"), levels=(2, 3))
        self.assertEqual(len(reports), 8)
        self.assertEqual([r.name for r in reports[:2]], ["mixture_lower", "mixture_upper"])
        self.assertTrue(all(r.passed for r in reports))


class TestWeightedLogRatioFamily(unittest.TestCase):

    def test_level_terms_are_one(self):
        """Every level contributes w_k b_k / log(1/b_k) = 1."""
        for K in range(1, 6):
            np.testing.assert_allclose(counterexample_levels(K).log_level_terms(), np.zeros(K), atol=1e-11)
        self.assertAlmostEqual(counterexample_rhs(9), 3.0, places=12)

    def test_direct_mode_agrees(self):
        """Log-domain and direct evaluation agree where the direct one is representable."""
        for K in range(1, DIRECT_LEVEL_LIMIT + 1):
            log_value = counterexample_lhs(K)
            self.assertAlmostEqual(counterexample_lhs(K, mode="direct"), log_value, delta=1e-10 * log_value)
        X = extremal_mixture("one", 3)
        for weight in ("one", "sqrt"):
            log_value = mixture_integral(X, weight)
            self.assertAlmostEqual(mixture_integral(X, weight, mode="direct"), log_value, delta=1e-10 * log_value)
        with self.assertRaises(DomainError):
            counterexample_lhs(DIRECT_LEVEL_LIMIT + 1, mode="direct")

    def test_ratio_grows_without_bound(self):
        """The ratio is nondecreasing and grows like sqrt(K): the lhs gains a fixed amount per level."""
        levels = (1, 2, 4, 8, 16, 32)
        ratios = {K: counterexample_ratio(K) for K in levels}
        for smaller, larger in zip(levels, levels[1:]):
            self.assertLessEqual(ratios[smaller], ratios[larger])
        self.assertGreaterEqual(ratios[16] / ratios[4], 1.55)
        self.assertGreaterEqual(ratios[32] / ratios[8], 1.7)
        slope = (counterexample_lhs(32) - counterexample_lhs(16)) / 16.0
        self.assertTrue(0.75 <= slope <= 0.9, slope)

    def test_deep_levels_stay_accurate(self):
        """At K = 32 the stored level terms are exact and the heat integral resolves with the default rule."""
        levels = counterexample_levels(32)
        np.testing.assert_allclose(levels.log_level_terms(), np.zeros(32), atol=1e-11)
        for t in (0.0, 1e-19, 1e-3, 1.0):
            self.assertTrue(np.all(np.isfinite(levels.log_heat_terms(t))))
        np.testing.assert_allclose(levels.log_heat_terms(0.0), np.arange(1, 33) * math.log(4.0), rtol=1e-14)
        lhs = counterexample_lhs(32)
        self.assertTrue(math.isfinite(lhs))
        self.assertGreater(lhs, counterexample_lhs(16))
        ratio = counterexample_ratio(32)
        self.assertTrue(math.isfinite(ratio) and ratio > counterexample_ratio(16), ratio)
        self.assertEqual([r.inputs["K"] for r in counterexample_sweep()], [1, 2, 4, 8, 16, 32])

    def test_report_and_sweep(self):
        """Reports are empirical and carry the ratio."""
        report = counterexample_report(3)
        self.assertEqual(report.status, ReportStatus.EMPIRICAL)
        self.assertAlmostEqual(report.extras["empirical_constant"], report.lhs / report.rhs)
        self.assertEqual([r.inputs["K"] for r in counterexample_sweep((1, 2))], [1, 2])
        with self.assertRaises(DomainError):
            counterexample_levels(0)


if __name__ == '__main__':
    unittest.main()
