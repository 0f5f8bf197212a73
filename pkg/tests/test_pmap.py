import unittest
from io import StringIO

import context

from skelmap.pmap import dumps, loads, dump_corpus, load_corpus
from skelmap.peeling import split, EDGE, build_polygon
from skelmap.triangulation import Triangulation, MapError, canonical_code

EDGE_MAP = 'pmap\ndarts 2\ntwin 1 0\nnext 1 0\nroot 1\nholes 0\nmarked -\nlabels -\nend\n'

class DumpsTestCase(unittest.TestCase):
    def test_edge_map(self):
        self.assertEqual(dumps(Triangulation.edge_map()), EDGE_MAP)

    def test_marked_and_labels(self):
        t = Triangulation.edge_map().with_marked(0).with_labels([0, 1])

        text = dumps(t)

        self.assertIn('marked 0\n', text)
        self.assertIn('labels 0 1\n', text)

class LoadsTestCase(unittest.TestCase):
    def test_edge_map(self):
        t = loads(EDGE_MAP)

        self.assertEqual(t.twin, (1, 0))
        self.assertEqual(t.nxt, (1, 0))
        self.assertEqual(t.root, 1)
        self.assertEqual(t.holes, (0,))
        self.assertIsNone(t.marked)
        self.assertIsNone(t.labels)

    def test_inverse_of_dumps(self):
        for t in [Triangulation.vertex_map(), build_polygon([split(2), EDGE, EDGE], 3),
                  Triangulation.edge_map().with_marked(0).with_labels([0, 1])]:
            with self.subTest(t=t):
                loaded = loads(dumps(t))

                self.assertEqual(canonical_code(loaded), canonical_code(t))
                self.assertEqual(loaded.labels, t.labels)

    def test_comments_and_blank_lines(self):
        t = loads('# an edge\n\n' + EDGE_MAP)

        self.assertTrue(t.is_edge_map)

    def test_invalid(self):
        for (text, message) in [('', 'expected one map, found 0'),
                                (EDGE_MAP + EDGE_MAP, 'expected one map, found 2'),
                                ('pmap\ndarts 2\n', 'unterminated map'),
                                ('pmap\npmap\n', 'line 2: unterminated map'),
                                ('end\n', 'line 1: end without pmap'),
                                ('darts 2\n', 'line 1: darts outside a map'),
                                ('pmap\ntwin 1 0\nend\n', 'invalid map record'),
                                ('pmap\ndarts x\nend\n', 'invalid map record'),
                                ('pmap\ndarts 4\ntwin 1 0\nnext 1 0\nroot 1\nend\n', 'expected 4 darts')]:
            with self.subTest(text=text):
                with self.assertRaisesRegex(MapError, message):
                    loads(text)

class CorpusTestCase(unittest.TestCase):
    def test_corpus(self):
        # Arrange
        maps = [Triangulation.edge_map(), build_polygon([split(2), EDGE, EDGE], 3)]

        file = StringIO()

        # Act
        dump_corpus(maps, file)

        file.seek(0)

        loaded = load_corpus(file)

        # Assert
        self.assertEqual([canonical_code(t) for t in loaded], [canonical_code(t) for t in maps])

    def test_empty_corpus(self):
        self.assertEqual(load_corpus(StringIO('')), [])
