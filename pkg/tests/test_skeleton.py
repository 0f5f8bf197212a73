import json
import unittest

import context

from skelmap.skeleton import (SkeletonDecomp, CodecError, decode_cylinder, encode_cylinder, decode_cone,
                              encode_cone, below_root, rho_skeleton, rho_unskeleton, delta_skeleton,
                              delta_unskeleton, skeleton_size)
from skelmap.forest import PlaneForest
from skelmap.geodesics import fan_triangulation
from skelmap.hull import height
from skelmap.oracle import enumerate_pointed, enumerate_cylinders
from skelmap.triangulation import Triangulation, canonical_code, validate_cylinder, validate_cone

MAX_VERTICES = 4

class PointedSkeletonTestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.corpus = enumerate_pointed(MAX_VERTICES)

    def test_delta_skeleton(self):
        for (index, t) in enumerate(self.corpus):
            with self.subTest(index=index):
                decomp = delta_skeleton(t)

                self.assertEqual(decomp.validate(), [])
                self.assertEqual(decomp.forest.height, height(t) - 1)
                self.assertEqual(skeleton_size(decomp), t.vertex_count)
                self.assertEqual(canonical_code(delta_unskeleton(decomp)), canonical_code(t))

    def test_rho_skeleton(self):
        for (index, t) in enumerate(self.corpus):
            with self.subTest(index=index):
                decomp = rho_skeleton(t)

                self.assertEqual(decomp.validate(), [])
                self.assertEqual(decomp.forest.height, height(t))
                self.assertEqual(decomp.marked_leaf[0], 0)
                self.assertEqual(skeleton_size(decomp), t.vertex_count)
                self.assertEqual(canonical_code(rho_unskeleton(decomp)), canonical_code(t))

    def test_decompositions_are_distinct(self):
        self.assertEqual(len({delta_skeleton(t) for t in self.corpus}), len(self.corpus))
        self.assertEqual(len({rho_skeleton(t) for t in self.corpus}), len(self.corpus))

    def test_json(self):
        for (index, t) in enumerate(self.corpus[:20]):
            with self.subTest(index=index):
                for decomp in (delta_skeleton(t), rho_skeleton(t)):
                    data = json.loads(json.dumps(decomp.to_json()))

                    self.assertEqual(SkeletonDecomp.from_json(data), decomp)

    def test_root_vertex_marked(self):
        t = Triangulation.edge_map().with_marked(1)

        with self.assertRaises(CodecError):
            rho_skeleton(t)

        with self.assertRaises(CodecError):
            delta_skeleton(t)

class CylinderTestCase(unittest.TestCase):
    def test_decode(self):
        # Arrange
        forest = PlaneForest.from_levels([[1, 1], [0, 0]])

        decomp = SkeletonDecomp('cylinder', forest, {0: fan_triangulation(3), 2: fan_triangulation(3)},
                                marked=1)

        # Act
        t = decode_cylinder(decomp)

        # Assert
        self.assertEqual(validate_cylinder(t, 1), [])
        self.assertEqual(t.vertex_count, 4)
        self.assertEqual(skeleton_size(decomp), 4)
        self.assertEqual(t.perimeter(0), 2)
        self.assertEqual(t.perimeter(1), 2)
        self.assertEqual(encode_cylinder(t), decomp)

    def test_corpus(self):
        for (r, p, q, max_vertices) in [(1, 1, 1, 4), (1, 2, 1, 5), (2, 1, 1, 5)]:
            for decomp in enumerate_cylinders(r, p, q, max_vertices):
                with self.subTest(r=r, p=p, q=q, decomp=decomp):
                    t = decode_cylinder(decomp)

                    self.assertEqual(validate_cylinder(t, r), [])
                    self.assertEqual(t.vertex_count, skeleton_size(decomp))
                    self.assertEqual(encode_cylinder(t), decomp)

    def test_marked_not_a_leaf(self):
        forest = PlaneForest.from_levels([[1], [0]])

        decomp = SkeletonDecomp('cylinder', forest, {0: fan_triangulation(3)}, marked=0)

        with self.assertRaisesRegex(CodecError, 'is not at height 1'):
            decode_cylinder(decomp)

    def test_missing_slot(self):
        forest = PlaneForest.from_levels([[1], [0]])

        decomp = SkeletonDecomp('cylinder', forest, {}, marked=1)

        self.assertEqual(decomp.validate(), ['slot domain mismatch: missing [0], extra []'])

        with self.assertRaisesRegex(CodecError, 'vertex 0 has no slot'):
            decode_cylinder(decomp)

    def test_slot_perimeter(self):
        forest = PlaneForest.from_levels([[1], [0]])

        decomp = SkeletonDecomp('cylinder', forest, {0: fan_triangulation(4)}, marked=1)

        self.assertEqual(decomp.validate(), ['slot of vertex 0 has perimeter 4, expected 3'])

    def test_encode_requires_two_holes(self):
        with self.assertRaisesRegex(CodecError, 'cylinder has 1 holes'):
            encode_cylinder(fan_triangulation(3))

class ConeTestCase(unittest.TestCase):
    def test_vertex_map(self):
        decomp = encode_cone(Triangulation.vertex_map())

        self.assertEqual(len(decomp.forest), 0)
        self.assertTrue(decode_cone(decomp).is_vertex_map)
        self.assertEqual(skeleton_size(decomp), 1)

    def test_single_root(self):
        # Arrange
        decomp = SkeletonDecomp('cone', PlaneForest([[0]]), {0: Triangulation.edge_map()})

        # Act
        t = decode_cone(decomp)

        # Assert
        self.assertEqual(validate_cone(t, 1), [])
        self.assertEqual(t.vertex_count, 2)
        self.assertEqual(skeleton_size(decomp), 2)
        self.assertEqual(encode_cone(t), decomp)

    def test_encode_requires_apex(self):
        with self.assertRaisesRegex(CodecError, 'marked apex'):
            encode_cone(fan_triangulation(3))

class DecompTestCase(unittest.TestCase):
    def test_unknown_kind(self):
        with self.assertRaisesRegex(CodecError, 'unknown decomposition kind'):
            SkeletonDecomp('sphere', PlaneForest.empty(), {})

    def test_invalid_record(self):
        for data in [{}, {'kind': 'cone', 'forest': {'trees': [[1]]}, 'slots': {}},
                     {'kind': 'cone', 'forest': {'trees': [[0]]}, 'slots': {'0': 'pmap\n'}}]:
            with self.subTest(data=data):
                with self.assertRaises(CodecError):
                    SkeletonDecomp.from_json(data)

    def test_kind_check(self):
        decomp = SkeletonDecomp('cone', PlaneForest.empty(), {})

        with self.assertRaisesRegex(CodecError, 'expected a rho decomposition, found cone'):
            rho_unskeleton(decomp)

        with self.assertRaisesRegex(CodecError, 'expected a delta decomposition, found cone'):
            delta_unskeleton(decomp)

    def test_delta_without_cap(self):
        decomp = SkeletonDecomp('delta', PlaneForest([[0]]), {})

        self.assertEqual(decomp.validate(), ['delta-skeleton without a cap'])

    def test_below_root(self):
        forest = PlaneForest([[2, 1, 0, 0]])

        self.assertEqual(below_root(forest), PlaneForest([[1, 0], [0]]))

        with self.assertRaisesRegex(CodecError, 'expected one tree, found 2'):
            below_root(PlaneForest([[0], [0]]))
