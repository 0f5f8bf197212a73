import unittest

import context

from skelmap.gf import SeriesContext
from skelmap.pmf import NuPmf, MAX_TABLE_SIZE
from skelmap.rng import RngStream

class ThetaPmfTestCase(unittest.TestCase):
    def setUp(self):
        self.gf = SeriesContext(128)
        self.law = self.gf.theta_law()

    def test_first_terms(self):
        self.assertAlmostEqual(float(self.law(0)), 0.75, places=15)
        self.assertAlmostEqual(float(self.law(1)), 0.125, places=15)
        self.assertEqual(self.law(-1), 0)

    def test_survival(self):
        total = self.gf.ctx.zero

        for k in range(12):
            with self.subTest(k=k):
                self.assertLess(abs(self.law.survival(k) - (1 - total)), self.gf.ctx.mpf('1e-30'))

            total += self.law(k)

    def test_mean(self):
        self.assertLess(abs(self.law.mean() - 1), self.gf.ctx.mpf('1e-20'))

    def test_table_extension(self):
        self.law(200)

        self.assertGreaterEqual(len(self.law), 201)

        total = self.gf.ctx.fsum(self.law.table) + self.law.tail_mass

        self.assertLess(abs(total - 1), self.gf.ctx.mpf('1e-30'))

    def test_subcritical(self):
        law = self.gf.theta_law(0.5)

        self.assertEqual(law.a_squared, 4)
        self.assertLess(law.mean(), 1)

    def test_sample(self):
        rng = RngStream(1)

        values = self.law.sample(rng, 10_000)

        zeros = int((values == 0).sum())

        # 4σ band around 7500.
        self.assertGreater(zeros, 7327)
        self.assertLess(zeros, 7673)

    def test_sample_reproducible(self):
        a = self.law.sample(RngStream(3), 100)
        b = self.law.sample(RngStream(3), 100)

        self.assertEqual(list(a), list(b))
        self.assertIsInstance(self.law.sample(RngStream(3)), int)

    def test_quantile_search(self):
        v = self.gf.ctx.mpf('1e-4')

        n = self.law.quantile_search(v)

        self.assertLess(self.law.survival(n + 1), v)
        self.assertGreaterEqual(self.law.survival(n), v)

class NuPmfTestCase(unittest.TestCase):
    def setUp(self):
        self.gf = SeriesContext(128)
        self.law = self.gf.nu_law()

    def test_first_term(self):
        self.assertLess(abs(self.law(0) - self.gf.ctx.mpf(2) / 3), self.gf.ctx.mpf('1e-30'))
        self.assertLess(abs(self.law(0) - self.gf.psi(0)), self.gf.ctx.mpf('1e-30'))

    def test_survival(self):
        total = self.gf.ctx.zero

        for k in range(8):
            with self.subTest(k=k):
                self.assertLess(abs(self.law.survival(k) - (1 - total)), self.gf.ctx.mpf('1e-25'))

            total += self.law(k)

    def test_mean(self):
        self.assertLess(abs(self.law.mean() - 2), self.gf.ctx.mpf('1e-20'))

    def test_value_far_matches_table(self):
        for p in (0, 7, 150):
            with self.subTest(p=p):
                self.assertLess(abs(self.law.value_far(p) / self.law(p) - 1), self.gf.ctx.mpf('1e-30'))

    def test_survival_beyond_table(self):
        k = 10 ** 9

        self.assertGreater(k, len(self.law))

        survival = self.law.survival(k)

        self.assertGreater(survival, self.law.survival(2 * k))
        self.assertLess(abs(survival * self.gf.ctx.mpf(k) ** 1.5 / (self.law.survival(k // 2) * (k // 2) ** 1.5) - 1),
                        self.gf.ctx.mpf('1e-6'))

    def test_requires_critical_theta(self):
        with self.assertRaises(ValueError):
            NuPmf(self.gf.ctx, self.gf.theta_law(0.5))

class SizeBiasedPmfTestCase(unittest.TestCase):
    def test_terms(self):
        gf = SeriesContext(128)

        law = gf.size_biased_theta_law()
        theta = gf.theta_law()

        self.assertEqual(law(0), 0)

        for k in range(1, 6):
            with self.subTest(k=k):
                self.assertLess(abs(law(k) - k * theta(k)), gf.ctx.mpf('1e-30'))

        self.assertLess(abs(law.survival(1) - 1), gf.ctx.mpf('1e-20'))
        self.assertEqual(law.mean(), gf.ctx.inf)

    def test_nu_normalized(self):
        gf = SeriesContext(128)

        law = gf.size_biased_nu_law()

        self.assertLess(abs(law.survival(0) - 1), gf.ctx.mpf('1e-20'))

    def test_sample_beyond_table(self):
        # Arrange
        gf = SeriesContext(128)

        law = gf.size_biased_nu_law()

        v = gf.ctx.mpf('1e-5')

        # Act
        n = law.quantile_search(v)

        # Assert
        self.assertGreater(n, MAX_TABLE_SIZE)
        self.assertLess(law.survival(n + 1), v)
        self.assertGreaterEqual(law.survival(n), v)

    def test_draws_beyond_table(self):
        gf = SeriesContext(128)

        law = gf.size_biased_nu_law()

        values = law.sample(RngStream(5), 2_000)

        self.assertEqual(len(law), MAX_TABLE_SIZE)
        self.assertTrue(all(value >= 1 for value in values))

    def test_nu_survival(self):
        gf = SeriesContext(128)

        law = gf.size_biased_nu_law()

        total = gf.ctx.zero

        for k in range(8):
            with self.subTest(k=k):
                self.assertLess(abs(law.survival(k) - (1 - total)), gf.ctx.mpf('1e-25'))

            total += law(k)
