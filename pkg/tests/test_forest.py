import unittest

import context

from skelmap.forest import PlaneForest, ForestError, is_lukasiewicz

class PlaneForestTestCase(unittest.TestCase):
    def setUp(self):
        # Tree 0 is a root with one leaf, tree 1 a root with two children,
        # the first of which has one child.
        self.forest = PlaneForest.from_levels([[1, 2], [0, 1, 0], [0]])

    def test_from_levels(self):
        self.assertEqual(self.forest.trees, ((1, 0), (2, 1, 0, 0)))
        self.assertEqual(self.forest.child_counts, (1, 0, 2, 1, 0, 0))
        self.assertEqual(len(self.forest), 6)

    def test_generations(self):
        self.assertEqual(self.forest.generations, ((0, 2), (1, 3, 5), (4,)))
        self.assertEqual(self.forest.generation(3), ())
        self.assertEqual(self.forest.height, 2)
        self.assertEqual(self.forest.count_at_height(1), 3)
        self.assertEqual(self.forest.bfs_order(), [0, 2, 1, 3, 5, 4])

    def test_structure(self):
        forest = self.forest

        self.assertEqual(forest.parent(4), 3)
        self.assertIsNone(forest.parent(2))
        self.assertEqual(forest.depth(4), 2)
        self.assertEqual(forest.children(2), (3, 5))
        self.assertEqual(forest.tree_of(5), 1)
        self.assertEqual(forest.rank(5), 3)
        self.assertEqual(forest.vertex(1, 3), 5)
        self.assertEqual(forest.tree_starts, (0, 2, 6))
        self.assertEqual(forest.tree_heights(), [1, 2])

    def test_invalid_vertex(self):
        with self.assertRaises(ForestError):
            self.forest.vertex(0, 2)

    def test_levels_inverse(self):
        self.assertEqual(PlaneForest.from_levels(self.forest.levels()), self.forest)

    def test_truncate(self):
        truncated = self.forest.truncate(1)

        self.assertEqual(truncated.trees, ((1, 0), (2, 0, 0)))
        self.assertEqual(truncated.height, 1)

    def test_serialization(self):
        self.assertEqual(PlaneForest.from_json(self.forest.to_json()), self.forest)

        sequence = self.forest.sequence()

        self.assertEqual(sequence, [1, 0, -1, 2, 1, 0, 0, -1])
        self.assertEqual(PlaneForest.from_sequence(sequence), self.forest)

    def test_unterminated_sequence(self):
        with self.assertRaises(ForestError):
            PlaneForest.from_sequence([1, 0])

    def test_level_mismatch(self):
        with self.assertRaises(ForestError):
            PlaneForest.from_levels([[2], [0]])

    def test_invalid_tree(self):
        with self.assertRaises(ForestError):
            PlaneForest([[1]])

    def test_empty(self):
        forest = PlaneForest.empty()

        self.assertEqual(len(forest), 0)
        self.assertEqual(forest.height, -1)
        self.assertEqual(forest.generation(0), ())

    def test_hash(self):
        other = PlaneForest([[1, 0], [2, 1, 0, 0]])

        self.assertEqual(hash(other), hash(self.forest))
        self.assertEqual(len({other, self.forest}), 1)

class IsLukasiewiczTestCase(unittest.TestCase):
    def test_valid(self):
        for tree in [[0], [2, 0, 0], [1, 1, 0], [3, 0, 1, 0, 0]]:
            with self.subTest(tree=tree):
                self.assertTrue(is_lukasiewicz(tree))

    def test_invalid(self):
        for tree in [[], [1], [1, 0, 0], [0, 0], [2, -1, 0]]:
            with self.subTest(tree=tree):
                self.assertFalse(is_lukasiewicz(tree))
