import io
import json
import math
import unittest
from unittest.mock import Mock, patch, mock_open, ANY

import context

from mpmath import mpf

from skelmap.commands import (cmd_verify, cmd_twopoint, cmd_enumerate, cmd_sample, cmd_coalescence,
                              cmd_horohull, write_report, _number)
from skelmap.samplers import HorohullStatistics, volume_bound
from skelmap.config import ExperimentConfig
from skelmap.verify import CheckResult

class NumberTestCase(unittest.TestCase):
    def test_number(self):
        for value in [None, True, 3, 'text']:
            with self.subTest(value=value):
                self.assertIs(_number(value), value)

        self.assertEqual(_number(mpf(0.5)), 0.5)
        self.assertIsInstance(_number(mpf(0.5)), float)

class VerifyCommandTestCase(unittest.TestCase):
    def setUp(self):
        patcher = patch('skelmap.commands.Verifier')

        self.verifier_class = patcher.start()

        self.addCleanup(patch.stopall)

    def test_passed(self):
        # Arrange
        self.verifier_class.return_value.run.return_value = [CheckResult('codec', 'pointed_corpus', True, '105 maps', 1.23456)]

        config = ExperimentConfig()

        # Act
        (code, report) = cmd_verify(config, 'codec', quick=True)

        # Assert
        self.assertEqual(code, 0)

        self.verifier_class.assert_called_once_with(config, quick=True)
        self.verifier_class.return_value.run.assert_called_once_with('codec')

        self.assertTrue(report['passed'])
        self.assertEqual(report['command'], 'verify')
        self.assertEqual(report['rows'], [{'suite': 'codec', 'check': 'pointed_corpus', 'passed': True,
                                           'detail': '105 maps', 'elapsed': 1.235}])

    def test_failed(self):
        self.verifier_class.return_value.run.return_value = [
            CheckResult('series', 'exact_table', True, '', 0.0),
            CheckResult('series', 'offspring_means', False, 'mean 0.9', 0.0)
        ]

        (code, report) = cmd_verify(ExperimentConfig(), 'series')

        self.assertEqual(code, 1)
        self.assertFalse(report['passed'])

class TwoPointCommandTestCase(unittest.TestCase):
    def setUp(self):
        self.gf = Mock()

        self.gf.two_point_scaling_limit.return_value = 0.5
        self.gf.two_point_ratio.return_value = 0.55

        patch('skelmap.commands._context', return_value=self.gf).start()

        self.addCleanup(patch.stopall)

    def test_rows(self):
        report = cmd_twopoint(ExperimentConfig(), [10, 20], [1.0])

        self.assertEqual([(row['h'], row['lambda']) for row in report['rows']], [(10, 1.0), (20, 1.0)])

        row = report['rows'][0]

        self.assertEqual(row['ratio'], 0.55)
        self.assertEqual(row['limit'], 0.5)
        self.assertAlmostEqual(row['relative_error'], 0.1)

        self.gf.two_point_ratio.assert_any_call(20, 1.0)

class EnumerateCommandTestCase(unittest.TestCase):
    def test_rows(self):
        report = cmd_enumerate(ExperimentConfig(), 2, 2)

        self.assertEqual([row['inner'] for row in report['rows']], [0, 1, 2])
        self.assertEqual(report['rows'][0]['count'], 1)

        for row in report['rows']:
            with self.subTest(inner=row['inner']):
                self.assertEqual(row['count'], row['series'])

        self.assertEqual(len(report['maps']), sum(row['count'] for row in report['rows']))
        self.assertEqual(report['p'], 2)

    def test_corpus_file(self):
        open_ = mock_open()

        with patch('skelmap.commands.open', open_, create=True):
            with self.assertLogs('skelmap.commands', level='INFO'):
                cmd_enumerate(ExperimentConfig(output_path='polygons.pmap'), 1, 1)

        open_.assert_called_once_with('polygons.pmap', 'w')

        written = ''.join(call.args[0] for call in open_.return_value.write.call_args_list)

        self.assertIn('pmap', written)

class SampleCommandTestCase(unittest.TestCase):
    def test_polygon(self):
        # Arrange
        config = ExperimentConfig(seed=5, stream_count=2, sample_counts={'default': 3})

        # Act
        report = cmd_sample(config, 'polygon', p=3)

        # Assert
        self.assertEqual(report['kind'], 'polygon')
        self.assertEqual([(row['stream'], row['index']) for row in report['rows']], [(0, 0), (0, 1), (1, 0)])

        for row in report['rows']:
            self.assertGreaterEqual(row['inner_vertices'], 0)
            self.assertTrue(row['pmap'].startswith('pmap'))

    def test_reproducible(self):
        config = ExperimentConfig(seed=8, sample_counts={'default': 2})

        self.assertEqual(cmd_sample(config, 'skeleton', r=2)['rows'], cmd_sample(config, 'skeleton', r=2)['rows'])

    def test_invalid_kind(self):
        with self.assertRaises(ValueError):
            cmd_sample(ExperimentConfig(), 'sphere')

class HorohullCommandTestCase(unittest.TestCase):
    def setUp(self):
        self.gf = Mock()

        self.gf.horohull_scaling_limit.return_value = 0.5
        self.gf.horohull_laplace.return_value = 0.6
        self.gf.conditional_horohull_gf.return_value = 0.25

        patch('skelmap.commands._context', return_value=self.gf).start()
        patch('skelmap.commands._replicate', side_effect=lambda config, task, total: [task(None, total)]).start()

        self.sampler = patch('skelmap.commands.Sampler').start().return_value

        self.addCleanup(patch.stopall)

    def test_rows(self):
        # Arrange
        skel = Mock()

        skel.forest.child_counts = [2, 1, 2, 0, 0, 0]
        skel.forest.generation.side_effect = lambda g: {1: [1, 2], 2: [3, 4, 5]}[g]

        self.sampler.horohull_statistics.side_effect = [HorohullStatistics(2, None, None, None),
                                                        HorohullStatistics(2, 3, 10, skel)]

        (s1, s2) = (math.exp(-1 / 16), math.exp(-1 / 4))

        # Act
        with self.assertLogs('skelmap.commands', level='INFO'):
            report = cmd_horohull(ExperimentConfig(sample_counts={'horohull': 2}), [2], 1.0, 1.0)

        # Assert
        row = report['rows'][0]

        self.assertAlmostEqual(row['plain'], s1 ** 10 * s2 ** 3 / 2)
        self.assertEqual(row['conditional'], 0.125)
        self.assertEqual((row['exact'], row['limit']), (0.6, 0.5))

        self.sampler.horohull_statistics.assert_called_with(2, None, volume_bound(s1))
        self.gf.conditional_horohull_gf.assert_called_once_with([2, 1, 2], [2, 3], s1, s2)

class CoalescenceCommandTestCase(unittest.TestCase):
    def setUp(self):
        self.estimate = patch('skelmap.commands.estimate_coalescence').start()

        patch('skelmap.commands.Sampler').start()

        self.addCleanup(patch.stopall)

    def test_rows(self):
        self.estimate.side_effect = lambda sampler, r, q_rule, n, replicate_: {
            'r': r, 'events': 1, 'low': 0.0, 'high': 0.5
        }

        config = ExperimentConfig(sample_counts={'coalescence': 10})

        with self.assertLogs('skelmap.commands', level='INFO'):
            report = cmd_coalescence(config, [2, 4], 3.5)

        self.assertEqual([row['r'] for row in report['rows']], [2, 4])
        self.assertEqual(report['q_rule'], 3.5)

        self.estimate.assert_any_call(ANY, 4, 3.5, 10, ANY)

class WriteReportTestCase(unittest.TestCase):
    def test_json(self):
        # Arrange
        report = _sample_report()

        file = io.StringIO()

        # Act
        write_report(report, ExperimentConfig(), file)

        # Assert
        self.assertEqual(json.loads(file.getvalue()), report)
        self.assertTrue(file.getvalue().endswith('\n'))

    def test_csv(self):
        # Arrange
        report = _sample_report()

        file = io.StringIO()

        # Act
        write_report(report, ExperimentConfig(format='csv'), file)

        # Assert
        lines = file.getvalue().splitlines()

        self.assertEqual(lines[0], '# config: ' + json.dumps(report['config'], sort_keys=True))
        self.assertEqual(lines[1], 'r,forest,volume')
        self.assertEqual(lines[2], '1,"{""trees"": [[1, 0]]}",')
        self.assertEqual(lines[3], '2,,5')

    def test_output_path(self):
        open_ = mock_open()

        with patch('skelmap.commands.open', open_, create=True):
            with self.assertLogs('skelmap.commands', level='INFO'):
                write_report(_sample_report(), ExperimentConfig(output_path='report.json'))

        open_.assert_called_once_with('report.json', 'w', newline='')

    def test_stdout(self):
        with patch('sys.stdout', new_callable=io.StringIO) as stdout:
            write_report(_sample_report(), ExperimentConfig())

        self.assertEqual(json.loads(stdout.getvalue())['command'], 'sample')

def _sample_report():
    return {
        'command': 'sample',
        'config': ExperimentConfig().to_dict(),
        'rows': [
            {'r': 1, 'forest': {'trees': [[1, 0]]}},
            {'r': 2, 'volume': 5}
        ]
    }
