import unittest

import context

from skelmap.hull import (RadiusError, height, horofunction, cap_faces, hull_faces, hull, split_hull, rho_cap,
                          horohull_faces, split_horohull, co_horohull, horohull, rightmost_boundary_vertex)
from skelmap.geodesics import fan_triangulation
from skelmap.oracle import enumerate_pointed
from skelmap.triangulation import MapError, canonical_code, validate, validate_cylinder, validate_cone

class HullTestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.corpus = enumerate_pointed(4)

    def test_height(self):
        heights = {height(t) for t in self.corpus}

        self.assertEqual(min(heights), 1)
        self.assertLessEqual(max(heights), 3)

    def test_unpointed(self):
        with self.assertRaisesRegex(MapError, 'not pointed'):
            height(fan_triangulation(3))

    def test_horofunction(self):
        for (index, t) in enumerate(self.corpus):
            with self.subTest(index=index):
                labels = horofunction(t)

                self.assertEqual(labels[t.root_vertex], 0)
                self.assertEqual(labels[t.marked_vertex], -height(t))

    def test_faces_partition(self):
        for (index, t) in enumerate(self.corpus):
            for r in range(height(t)):
                with self.subTest(index=index, r=r):
                    cap = cap_faces(t, r)
                    rest = hull_faces(t, r)

                    self.assertFalse(cap & rest)
                    self.assertEqual(len(cap) + len(rest), t.face_count)
                    self.assertNotIn(t.face_of[t.holes[0]], cap)

    def test_hull_is_cylinder(self):
        for (index, t) in enumerate(self.corpus):
            for r in range(height(t)):
                with self.subTest(index=index, r=r):
                    hull_map = hull(t, r)

                    self.assertEqual(validate_cylinder(hull_map, r), [])
                    self.assertEqual(hull_map.perimeter(0), 1)

    def test_rho_cap(self):
        for (index, t) in enumerate(self.corpus):
            with self.subTest(index=index):
                cap = rho_cap(t)

                self.assertEqual(validate(cap), [])
                self.assertEqual(len(cap.holes), 1)
                self.assertIsNotNone(cap.marked)
                self.assertEqual(cap.root, cap.twin[cap.holes[0]])

    def test_root_loop(self):
        for (index, t) in enumerate(self.corpus):
            with self.subTest(index=index):
                # Act
                (hull_map, cap_map, *_) = split_hull(t, 0)

                # Assert
                self.assertEqual(len(hull_map), 2)
                self.assertEqual(validate_cylinder(hull_map, 0), [])
                self.assertEqual(hull_map.root, hull_map.twin[hull_map.holes[0]])

                self.assertEqual(validate(cap_map), [])
                self.assertEqual(cap_map.vertex_count, t.vertex_count)
                self.assertEqual(canonical_code(rho_cap(t, 0)), canonical_code(t))

    def test_rho_cap_of_height_one(self):
        corpus = [t for t in self.corpus if height(t) == 1]

        self.assertTrue(corpus)

        for (index, t) in enumerate(corpus):
            with self.subTest(index=index):
                self.assertEqual(canonical_code(rho_cap(t)), canonical_code(t))

    def test_radius(self):
        t = self.corpus[0]

        h = height(t)

        for r in (-1, h):
            with self.subTest(r=r):
                with self.assertRaises(RadiusError):
                    cap_faces(t, r)

        for r in (0, h + 1):
            with self.subTest(r=r):
                with self.assertRaises(RadiusError):
                    horohull_faces(t, r)

class HorohullTestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.corpus = enumerate_pointed(4)

    def test_split(self):
        for (index, t) in enumerate(self.corpus):
            h = height(t)

            for r in range(1, h):
                with self.subTest(index=index, r=r):
                    (cone, horo) = split_horohull(t, r)

                    self.assertEqual(validate_cone(cone, h - r), [])
                    self.assertEqual(validate(horo), [])
                    self.assertEqual(cone.vertex_count + horo.vertex_count - cone.perimeter(), t.vertex_count)
                    self.assertEqual(horo.perimeter(1), cone.perimeter())

    def test_full_radius(self):
        for (index, t) in enumerate(self.corpus):
            with self.subTest(index=index):
                h = height(t)

                self.assertTrue(co_horohull(t, h).is_vertex_map)
                self.assertEqual(horohull(t, h).twin, t.twin)

    def test_labels(self):
        for (index, t) in enumerate(self.corpus):
            with self.subTest(index=index):
                horo = horohull(t, 1)

                self.assertIsNotNone(horo.labels)
                self.assertEqual(horo.labels[horo.root], 0)

    def test_rightmost_vertex(self):
        for (index, t) in enumerate(self.corpus):
            with self.subTest(index=index):
                self.assertEqual(rightmost_boundary_vertex(t, {t.marked_vertex}), t.marked_vertex)
