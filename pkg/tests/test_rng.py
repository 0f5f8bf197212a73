import unittest

import context

from skelmap.rng import RngStream, streams, stream_shares, replicate

class RngStreamTestCase(unittest.TestCase):
    def test_reproducible(self):
        a = RngStream(7, 1).random(5)
        b = RngStream(7, 1).random(5)

        self.assertEqual(list(a), list(b))

    def test_streams_differ(self):
        (first, second) = streams(7, 2)

        self.assertEqual(first.stream_id, 0)
        self.assertEqual(second.stream_id, 1)

        self.assertNotEqual(list(first.random(5)), list(second.random(5)))

    def test_uniform_index(self):
        rng = RngStream(0)

        indices = {rng.uniform_index(3) for _ in range(100)}

        self.assertEqual(indices, {0, 1, 2})

class StreamSharesTestCase(unittest.TestCase):
    def test_shares(self):
        self.assertEqual(stream_shares(10, 3), [4, 3, 3])
        self.assertEqual(stream_shares(2, 4), [1, 1, 0, 0])
        self.assertEqual(stream_shares(0, 2), [0, 0])

    def test_invalid_count(self):
        with self.assertRaises(ValueError):
            stream_shares(10, 0)

class ReplicateTestCase(unittest.TestCase):
    def test_results_in_stream_order(self):
        results = replicate(_identify, 10, seed=5, stream_count=3, workers=3)

        self.assertEqual(results, [(5, 0, 4), (5, 1, 3), (5, 2, 3)])

    def test_empty_streams_are_skipped(self):
        results = replicate(_identify, 2, seed=5, stream_count=4)

        self.assertEqual(results, [(5, 0, 1), (5, 1, 1)])

    def test_independent_of_workers(self):
        first = replicate(_draw, 9, seed=11, stream_count=3, workers=1)
        second = replicate(_draw, 9, seed=11, stream_count=3, workers=3)

        self.assertEqual(first, second)

def _identify(rng, count):
    return (rng.seed, rng.stream_id, count)

def _draw(rng, count):
    return [float(value) for value in rng.random(count)]
