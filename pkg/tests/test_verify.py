import unittest
from unittest.mock import Mock, ANY

import context

from skelmap.config import ExperimentConfig
from skelmap.rng import RngStream
from skelmap.verify import Verifier, CheckResult, QUICK_SAMPLES, FULL_SAMPLES, estimate_coalescence, event_fixture

class VerifierTestCase(unittest.TestCase):
    def setUp(self):
        self.verifier = Verifier(ExperimentConfig(), quick=True)

    def test_samples(self):
        self.assertEqual(self.verifier.samples('forcing'), QUICK_SAMPLES['forcing'])
        self.assertEqual(Verifier(ExperimentConfig()).samples('forcing'), FULL_SAMPLES['forcing'])

        config = ExperimentConfig(sample_counts={'default': 7})

        self.assertEqual(Verifier(config).samples('boltzmann'), 7)

    def test_run_suite(self):
        # Arrange
        passing = Mock(return_value=(True, 'fine'))
        failing = Mock(return_value=(False, 'off by one'))

        self.verifier.checks['codec'] = [('first', passing), ('second', failing)]

        # Act
        with self.assertLogs('skelmap.verify', level='INFO'):
            results = self.verifier.run('codec')

        # Assert
        self.assertEqual([(result.suite, result.name, result.passed, result.detail) for result in results],
                         [('codec', 'first', True, 'fine'), ('codec', 'second', False, 'off by one')])

        passing.assert_called_once_with()
        failing.assert_called_once_with()

    def test_run_all(self):
        for name in self.verifier.checks:
            self.verifier.checks[name] = [(f'{name}_check', Mock(return_value=(True, '')))]

        with self.assertLogs('skelmap.verify', level='INFO'):
            results = self.verifier.run()

        self.assertEqual([result.suite for result in results], ['series', 'codec', 'samplers', 'geodesics'])
        self.assertTrue(all(result.passed for result in results))

    def test_unknown_suite(self):
        with self.assertRaises(ValueError):
            self.verifier.run('everything')

    def test_check_raises(self):
        check = Mock(side_effect=RuntimeError('boom'))

        with self.assertLogs('skelmap.verify', level='ERROR'):
            result = self.verifier.run_check('series', 'broken', check)

        self.assertIsInstance(result, CheckResult)
        self.assertFalse(result.passed)
        self.assertEqual(result.detail, 'RuntimeError: boom')

    def test_event_fixture(self):
        (passed, detail) = self.verifier.check_event_fixture()

        self.assertTrue(passed)
        self.assertEqual(detail, 'v_r at height 4')

    def test_corpus_checks(self):
        self.verifier.pointed_vertices = 4

        for check in [self.verifier.check_cylinder_corpus, self.verifier.check_cone_corpus,
                      self.verifier.check_delta_cap_corpus, self.verifier.check_rho_cap_corpus]:
            with self.subTest(check=check.__name__):
                (passed, detail) = check()

                self.assertTrue(passed, detail)

    def test_codec_checks_registered(self):
        names = [name for (name, _) in self.verifier.checks['codec']]

        self.assertEqual(names, ['pointed_corpus', 'cylinder_corpus', 'cone_corpus', 'delta_cap_corpus',
                                 'rho_cap_corpus', 'polygon_counts', 'two_point_counts'])
        self.assertEqual(Verifier(ExperimentConfig()).pointed_vertices, 8)

class EstimateCoalescenceTestCase(unittest.TestCase):
    def test_estimate(self):
        # Arrange
        sampler = Mock()

        sampler.sample_cylinder_forest.return_value = (event_fixture().forest, 1)
        sampler.sample_chord_free.return_value = True

        def replicate(task, total):
            return [task(RngStream(0, 0), 2), task(RngStream(0, 1), total - 2)]

        # Act
        with self.assertLogs('skelmap.verify', level='WARNING'):
            row = estimate_coalescence(sampler, 3, 1.0, 5, replicate)

        # Assert
        self.assertEqual(row['r'], 3)
        self.assertEqual(row['q'], 9)
        self.assertEqual(row['samples'], 5)
        self.assertEqual(row['events'], 5)
        self.assertEqual(row['estimate'], 1.0)
        self.assertEqual(row['resampled'], 5)
        self.assertLess(row['low'], 1.0)

        sampler.sample_cylinder_forest.assert_called_with(9, 3, ANY)
        sampler.sample_chord_free.assert_called_with(9, ANY)

    def test_no_event(self):
        sampler = Mock()

        sampler.sample_cylinder_forest.return_value = (event_fixture().forest, 0)
        sampler.sample_chord_free.return_value = False

        row = estimate_coalescence(sampler, 3, 3.5, 4, lambda task, total: [task(RngStream(1), total)])

        self.assertEqual(row['q'], 32)
        self.assertEqual(row['events'], 0)
        self.assertEqual(row['low'], 0.0)
        self.assertEqual(row['resampled'], 0)
