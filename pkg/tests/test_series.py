import unittest
from fractions import Fraction
from math import factorial, prod

import context

from skelmap.qsqrt3 import QSqrt3, SQRT3
from skelmap.series import (LaurentSeries, SeriesError, catalan, to_counts, conjugate_t_series,
                            boundary_counts, ExactSeries)

class LaurentSeriesTestCase(unittest.TestCase):
    def setUp(self):
        self.s = LaurentSeries.monomial(1, 6)

    def test_geometric_inverse(self):
        inverse = (1 - self.s).inverse()

        self.assertEqual(inverse.coefficients(0, 6), [QSqrt3(1)] * 6)
        self.assertEqual(inverse.order, 6)

    def test_pole(self):
        inverse = self.s.inverse()

        self.assertEqual(inverse.valuation, -1)
        self.assertEqual(inverse.coefficient(-1), 1)
        self.assertEqual(inverse.coefficient(0), 0)

    def test_sqrt(self):
        square = (1 + self.s) * (1 + self.s)

        root = square.sqrt()

        self.assertEqual(root.coefficients(0, 6), [QSqrt3(1), QSqrt3(1)] + [QSqrt3()] * 4)

    def test_sqrt_odd_valuation(self):
        with self.assertRaises(SeriesError):
            self.s.sqrt()

    def test_coefficient_beyond_order(self):
        with self.assertRaises(SeriesError):
            self.s.coefficient(6)

    def test_zero_normalization(self):
        zero = self.s - self.s

        self.assertTrue(zero.is_zero())
        self.assertEqual(zero.valuation, zero.order)

        with self.assertRaises(SeriesError):
            zero.inverse()

class CountsTestCase(unittest.TestCase):
    def test_to_counts(self):
        series = LaurentSeries([1, 1, 1], 0, 3)

        self.assertEqual(to_counts(series, 2, scale=2), [1, 2, 4])

    def test_to_counts_rejects_poles(self):
        with self.assertRaises(SeriesError):
            to_counts(LaurentSeries([1], -1, 3), 1)

    def test_to_counts_rejects_fractions(self):
        with self.assertRaises(SeriesError):
            to_counts(LaurentSeries([Fraction(1, 2)], 0, 2), 1, scale=1)

    def test_catalan(self):
        self.assertEqual([catalan(n) for n in range(6)], [1, 1, 2, 5, 14, 42])

class ConjugateTestCase(unittest.TestCase):
    def test_equation(self):
        t = conjugate_t_series(8)
        s = LaurentSeries.monomial(1, 8)

        value = 2 * t * t * t - 3 * t * t + s * s

        self.assertTrue(value.is_zero())

    def test_leading_coefficient(self):
        t = conjugate_t_series(8)

        self.assertEqual(t.valuation, 1)
        self.assertEqual(t.coefficient(1), SQRT3 / 3)

    def test_offspring_law_is_a_probability(self):
        exact = ExactSeries(6)

        total = sum((exact.theta_t(k) for k in range(6)), LaurentSeries.constant(0, 6))

        # The tail Σ_{k>=6} vanishes to order 6 in s.
        self.assertEqual(total.coefficients(0, 6), [QSqrt3(1)] + [QSqrt3()] * 5)

class BoundaryCountsTestCase(unittest.TestCase):
    def test_polygons_without_inner_vertices(self):
        for p in range(2, 7):
            with self.subTest(p=p):
                self.assertEqual(boundary_counts(p, 0), [catalan(p - 2)])

    def test_closed_form(self):
        for p in range(1, 5):
            with self.subTest(p=p):
                counts = boundary_counts(p, 4)

                for n in range(1, 5):
                    self.assertEqual(counts[n], _closed_form(n, p))

    def test_small_values(self):
        self.assertEqual(boundary_counts(1, 2), [0, 1, 4])
        self.assertEqual(boundary_counts(2, 1), [1, 3])

def _double_factorial(n):
    return prod(range(n, 0, -2))

def _closed_form(n, p):
    """Number of triangulations of the p-gon with n >= 1 inner vertices."""
    value = Fraction(4 ** (n - 1) * p * factorial(2 * p) * _double_factorial(2 * p + 3 * n - 5),
                     factorial(p) ** 2 * factorial(n) * _double_factorial(2 * p + n - 1))

    assert value.denominator == 1

    return int(value)
