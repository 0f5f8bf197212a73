import unittest
from collections import Counter

import context

from skelmap.caps import compose_delta_cap, compose_rho_cap, decompose_rho_cap
from skelmap.oracle import (Enumerator, BudgetExceededError, enumerate_polygons, polygon_counts,
                            enumerate_spheres, enumerate_pointed, pointed_height, enumerate_forests,
                            enumerate_cylinders, enumerate_cones, enumerate_delta_caps, enumerate_rho_caps)
from skelmap.peeling import VERTEX, EDGE, split
from skelmap.series import boundary_counts, two_point_counts, cylinder_counts, cone_counts, cap_counts
from skelmap.triangulation import canonical_code, validate

MAX_VERTICES = 4

class EnumeratorTestCase(unittest.TestCase):
    def test_words(self):
        enumerator = Enumerator()

        self.assertEqual(enumerator.words(2, 0), ((EDGE,),))
        self.assertEqual(enumerator.words(1, 0), ())
        self.assertEqual(len(enumerator.words(1, 2)), 4)
        self.assertIn((VERTEX, VERTEX, split(2), EDGE, EDGE), enumerator.words(1, 2))

    def test_budget(self):
        enumerator = Enumerator(budget=10)

        with self.assertRaises(BudgetExceededError):
            enumerator.words(3, 2)

class PolygonCountsTestCase(unittest.TestCase):
    def test_counts_match_series(self):
        for p in range(1, 5):
            with self.subTest(p=p):
                self.assertEqual(polygon_counts(p, 3), boundary_counts(p, 3))

    def test_maps_are_distinct_and_valid(self):
        corpus = enumerate_polygons(3, 2)

        self.assertEqual(list(corpus.keys()), [0, 1, 2])
        self.assertEqual([len(maps) for maps in corpus.values()], boundary_counts(3, 2))

        for (inner, maps) in corpus.items():
            for t in maps:
                with self.subTest(inner=inner):
                    self.assertEqual(validate(t), [])
                    self.assertEqual(t.inner_vertex_count(), inner)

class SpheresTestCase(unittest.TestCase):
    def test_spheres(self):
        spheres = enumerate_spheres(MAX_VERTICES)

        self.assertEqual(len(spheres), 37)
        self.assertEqual(len({canonical_code(sphere) for sphere in spheres}), 37)

        for sphere in spheres:
            with self.subTest(sphere=sphere):
                self.assertEqual(validate(sphere), [])
                self.assertFalse(sphere.holes)

    def test_pointed(self):
        pointed = enumerate_pointed(MAX_VERTICES)

        self.assertEqual(len(pointed), 105)
        self.assertTrue(all(t.marked_vertex != t.root_vertex for t in pointed))

    def test_pointed_heights(self):
        histogram = Counter((t.vertex_count, pointed_height(t)) for t in enumerate_pointed(MAX_VERTICES))

        for h in (1, 2, 3):
            counts = two_point_counts(h, MAX_VERTICES)

            for n in range(MAX_VERTICES + 1):
                with self.subTest(h=h, n=n):
                    self.assertEqual(histogram[(n, h)], counts[n])

class ForestsTestCase(unittest.TestCase):
    def test_counts(self):
        self.assertEqual(len(list(enumerate_forests(1, 1, 1, 4))), 1)
        self.assertEqual(len(list(enumerate_forests(1, 2, 1, 4))), 3)
        self.assertEqual(len(list(enumerate_forests(2, 1, 1, 2))), 0)

    def test_shape(self):
        for forest in enumerate_forests(2, 2, 2, 6):
            with self.subTest(forest=forest):
                self.assertEqual(len(forest.trees), 2)
                self.assertEqual(forest.height, 2)
                self.assertEqual(forest.count_at_height(2), 2)
                self.assertLessEqual(len(forest), 6)

class CylindersTestCase(unittest.TestCase):
    def test_counts_match_series(self):
        decomps = enumerate_cylinders(1, 1, 1, MAX_VERTICES)

        sizes = Counter(_vertex_count(decomp) for decomp in decomps)

        counts = cylinder_counts(1, 1, 1, MAX_VERTICES)

        self.assertEqual([sizes[n] for n in range(MAX_VERTICES + 1)], counts)
        self.assertEqual(counts, [0, 0, 1, 10, 120])

    def test_smallest(self):
        self.assertEqual(len(enumerate_cylinders(1, 1, 1, 3)), 11)

class ConesTestCase(unittest.TestCase):
    def test_counts_match_series(self):
        for (r, q) in [(1, 1), (1, 2), (2, 1), (2, 2)]:
            with self.subTest(r=r, q=q):
                decomps = enumerate_cones(r, q, MAX_VERTICES)

                sizes = Counter(_vertex_count(decomp) + 1 for decomp in decomps)

                counts = cone_counts(r, q, MAX_VERTICES)

                self.assertEqual([sizes[n] for n in range(MAX_VERTICES + 1)], counts)

    def test_smallest(self):
        (decomp,) = enumerate_cones(1, 1, 2)

        self.assertEqual(decomp.validate(), [])
        self.assertEqual(decomp.forest.trees, ((0,),))
        self.assertTrue(decomp.slots[0].is_edge_map)

    def test_invalid_height(self):
        with self.assertRaises(ValueError):
            enumerate_cones(0, 1, 3)

class CapsTestCase(unittest.TestCase):
    def test_delta_caps_match_series(self):
        for p in (0, 1, 2):
            with self.subTest(p=p):
                caps = [compose_delta_cap(parts) for parts in enumerate_delta_caps(p, MAX_VERTICES)]

                sizes = Counter(cap.vertex_count - max(p, 1) for cap in caps)

                n_max = MAX_VERTICES - max(p, 1)

                self.assertEqual([sizes[n] for n in range(n_max + 1)], cap_counts(p, n_max))
                self.assertEqual(len({canonical_code(cap) for cap in caps}), len(caps))

    def test_rho_caps(self):
        for p in (1, 2):
            for parts in enumerate_rho_caps(p, MAX_VERTICES):
                with self.subTest(p=p, parts=parts):
                    cap = compose_rho_cap(parts)

                    self.assertEqual(cap.perimeter(), p)

                    inner = sum(t.inner_vertex_count() for t in [*parts.two_gons, parts.left, parts.right])

                    self.assertEqual(validate(cap), [])
                    self.assertEqual(cap.vertex_count, p + parts.i + inner)
                    self.assertEqual(decompose_rho_cap(cap).codes(), parts.codes())

    def test_smallest_rho_cap(self):
        (parts,) = enumerate_rho_caps(1, 2)

        self.assertEqual((parts.k, parts.j, parts.i), (1, 1, 1))
        self.assertTrue(parts.left.is_edge_map)
        self.assertTrue(parts.right.is_edge_map)

def _vertex_count(decomp):
    return len(decomp.forest) + sum(t.inner_vertex_count() for t in decomp.slots.values())
