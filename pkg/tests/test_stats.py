import math
import unittest

import context

from skelmap.stats import (wilson_interval, binomial_band, within_binomial_band, mean_band,
                           within_mean_band, total_variation, histogram)

class WilsonIntervalTestCase(unittest.TestCase):
    def test_symmetric_at_one_half(self):
        (low, high) = wilson_interval(50, 100)

        self.assertAlmostEqual((low + high) / 2, 0.5)
        self.assertLess(low, 0.5)
        self.assertGreater(high, 0.5)

    def test_no_successes(self):
        (low, high) = wilson_interval(0, 10)

        self.assertAlmostEqual(low, 0.0)
        self.assertGreater(high, 0.0)

    def test_all_successes(self):
        (low, high) = wilson_interval(10, 10)

        self.assertLess(low, 1.0)
        self.assertAlmostEqual(high, 1.0)

    def test_invalid_count(self):
        with self.assertRaises(ValueError):
            wilson_interval(0, 0)

class BandTestCase(unittest.TestCase):
    def test_binomial_band(self):
        (low, high) = binomial_band(0.5, 100)

        self.assertAlmostEqual(low, 30.0)
        self.assertAlmostEqual(high, 70.0)

        self.assertTrue(within_binomial_band(31, 100, 0.5))
        self.assertFalse(within_binomial_band(71, 100, 0.5))

    def test_mean_band(self):
        (mean, width) = mean_band([1, 2, 3])

        self.assertAlmostEqual(mean, 2.0)
        self.assertAlmostEqual(width, 4 / math.sqrt(3))

        self.assertTrue(within_mean_band([1, 2, 3], 3.5))
        self.assertFalse(within_mean_band([1, 2, 3], 5))

    def test_mean_band_single_value(self):
        with self.assertRaises(ValueError):
            mean_band([1])

class TotalVariationTestCase(unittest.TestCase):
    def test_exact_match(self):
        self.assertAlmostEqual(total_variation(['a', 'a', 'b', 'b'], {'a': 0.5, 'b': 0.5}), 0.0)

    def test_missing_outcomes(self):
        # The remaining outcome has probability 0.5 but is never drawn.
        self.assertAlmostEqual(total_variation([1, 1, 1, 1], {1: 0.5}), 0.5)

    def test_unlisted_outcomes(self):
        self.assertAlmostEqual(total_variation([1, 2, 3, 4], {1: 0.25}), 0.0)

    def test_no_samples(self):
        with self.assertRaises(ValueError):
            total_variation([], {1: 1.0})

class HistogramTestCase(unittest.TestCase):
    def test_large_values_in_last_bucket(self):
        self.assertEqual(list(histogram([0, 1, 1, 5, 9], 3)), [1, 2, 2])
