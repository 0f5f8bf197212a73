"""
skelmap.skeleton
~~~~~~~~~~~~~~~~

Skeleton decompositions of triangulations of the cylinder and of the cone,
and the two skeleton decompositions of pointed triangulations of the 1-gon.

A layer sits between an upper cycle u_0..u_{m-1} and a lower cycle. Its
down triangle k has the upper edge b_k from u_{k+1} to u_k and its apex w_k
on the lower cycle. The slot of u_k lies between the down triangles k-1 and
k and owns the lower edges from w_{k-1} to w_k; the lower endpoints of those
edges, except the last, are the children of u_k.
"""

import logging

from . import pmap
from .forest import PlaneForest, ForestError
from .hull import height as pointed_height, split_hull, split_horohull
from .triangulation import (Triangulation, MapBuilder, MapError, canonical_code, distances,
                            extract, flood_faces, glue, validate_cone, validate_cylinder)

logger = logging.getLogger(__name__)

KINDS = ('cylinder', 'cone', 'delta', 'rho')

class CodecError(Exception):
    """Input does not have the shape required by a codec."""

class SkeletonDecomp:
    """A plane forest with one slot triangulation per internal vertex.

    `slots` maps forest vertex ids to triangulations of the (c(v) + 2)-gon.
    `marked` is the marked leaf of cylinder and ρ-skeleton decompositions.
    `cap` is the triangulation carried by the root of a δ-skeleton (the
    δ-cap) or of a ρ-skeleton (the ρ-cap). `cycles` holds, when known, the
    vertex ids per generation of the encoded map and is not part of the
    decomposition proper.
    """

    def __init__(self, kind, forest, slots, marked=None, cap=None, cycles=None):
        if kind not in KINDS:
            raise CodecError(f'unknown decomposition kind: {kind}')

        self.kind = kind
        self.forest = forest
        self.slots = dict(slots)
        self.marked = marked
        self.cap = cap
        self.cycles = cycles

    def __repr__(self):
        return (f'<SkeletonDecomp kind={self.kind} trees={len(self.forest.trees)} '
                f'vertices={len(self.forest)} height={self.forest.height}>')

    def __eq__(self, other):
        return isinstance(other, SkeletonDecomp) and self.codes() == other.codes()

    def __hash__(self):
        return hash(self.codes())

    @property
    def marked_leaf(self):
        """The marked leaf as (tree, rank), or None."""
        if self.marked is None:
            return None

        return (self.forest.tree_of(self.marked), self.forest.rank(self.marked))

    def slot_vertices(self):
        """Forest vertices that carry a slot."""
        forest = self.forest

        if self.kind == 'cone':
            return list(range(len(forest)))

        if self.kind == 'cylinder':
            return [v for v in range(len(forest)) if forest.depth(v) < forest.height]

        if self.kind == 'rho':
            return [v for v in range(1, len(forest)) if forest.depth(v) < forest.height]

        return list(range(1, len(forest)))

    def validate(self):
        """Diagnostics for the decomposition, empty if consistent."""
        diagnostics = []

        expected = set(self.slot_vertices())

        if set(self.slots) != expected:
            missing = sorted(expected - set(self.slots))
            extra = sorted(set(self.slots) - expected)

            diagnostics.append(f'slot domain mismatch: missing {missing}, extra {extra}')

        for (vertex, slot) in sorted(self.slots.items()):
            if vertex not in expected:
                continue

            perimeter = 2 if slot.is_edge_map else slot.perimeter()

            if perimeter != self.forest.child_counts[vertex] + 2:
                diagnostics.append(f'slot of vertex {vertex} has perimeter {perimeter}, '
                                   f'expected {self.forest.child_counts[vertex] + 2}')

        if self.kind in ('cylinder', 'rho'):
            if self.marked is None or self.marked not in self.forest.generation(self.forest.height):
                diagnostics.append(f'marked vertex {self.marked} is not a leaf of maximal height')

        if self.kind in ('delta', 'rho'):
            if self.cap is None:
                diagnostics.append(f'{self.kind}-skeleton without a cap')

            if len(self.forest.trees) != 1:
                diagnostics.append(f'{self.kind}-skeleton forest has {len(self.forest.trees)} trees')
            elif self.kind == 'rho' and self.marked is not None and self.forest.tree_of(self.marked) != 0:
                diagnostics.append('marked leaf outside the tree')

        if self.kind == 'rho' and self.cap is not None and self.forest.trees:
            if self.cap.perimeter() != self.forest.child_counts[0]:
                diagnostics.append(f'cap perimeter {self.cap.perimeter()} differs from '
                                   f'{self.forest.child_counts[0]} root children')

        if self.kind == 'delta' and self.cap is not None and self.forest.trees:
            p = self.forest.child_counts[0]

            if len(self.cap.holes) != (2 if p else 1) or (p and self.cap.perimeter(1) != p):
                diagnostics.append(f'cap does not have a hole of perimeter {p}')

        return diagnostics

    def codes(self):
        """A hashable value identifying the decomposition."""
        slots = tuple((vertex, canonical_code(slot)) for (vertex, slot) in sorted(self.slots.items()))
        cap = None if self.cap is None else canonical_code(self.cap)

        return (self.kind, self.forest.trees, self.marked_leaf, slots, cap)

    def to_json(self):
        return {
            'kind': self.kind,
            'forest': self.forest.to_json(),
            'marked': None if self.marked is None else list(self.marked_leaf),
            'slots': {str(vertex): pmap.dumps(slot) for (vertex, slot) in sorted(self.slots.items())},
            'cap': None if self.cap is None else pmap.dumps(self.cap)
        }

    @classmethod
    def from_json(cls, data):
        try:
            forest = PlaneForest.from_json(data['forest'])

            marked = None

            if data.get('marked') is not None:
                (tree, rank) = data['marked']

                marked = forest.vertex(tree, rank)

            slots = {int(vertex): pmap.loads(text) for (vertex, text) in data['slots'].items()}
            cap = None if data.get('cap') is None else pmap.loads(data['cap'])

            return cls(data['kind'], forest, slots, marked=marked, cap=cap)
        except (KeyError, TypeError, ValueError, ForestError, MapError) as error:
            raise CodecError(f'invalid decomposition record: {error}') from error

def _fill_slot(builder, slots, vertex, open_darts):
    slot = slots.get(vertex)

    if slot is None:
        raise CodecError(f'vertex {vertex} has no slot')

    try:
        builder.fill(slot, open_darts)
    except MapError as error:
        raise CodecError(f'slot of vertex {vertex}: {error}') from error

def _stack_layers(builder, forest, slots, lower, generations):
    """Build the layers of `generations`, listed bottom-up, over the open darts `lower`.

    Returns the open darts of the topmost cycle and the triangles of each layer.
    """
    layers = []

    for g in generations:
        upper = forest.generation(g)

        if not upper:
            raise CodecError(f'generation {g} is empty')

        triangles = [builder.face(3) for _ in upper]

        start = 0

        for (k, vertex) in enumerate(upper):
            count = forest.child_counts[vertex]

            (a_before, _, _) = triangles[k - 1]
            (_, _, c) = triangles[k]

            _fill_slot(builder, slots, vertex, [a_before, *lower[start:start + count], c])

            start += count

        if start != len(lower):
            raise CodecError(f'generation {g} has {start} children for {len(lower)} lower vertices')

        layers.append(triangles)

        lower = [b for (_, b, _) in triangles]

    return (lower, layers)

def _close_top(builder, top):
    hole = [builder.dart() for _ in top]

    for (k, dart) in enumerate(top):
        builder.link(hole[k], dart)
        builder.nxt[hole[k]] = hole[(k + 1) % len(hole)]

    return hole

def decode_cylinder(decomp):
    """Build the (r, p, q)-cylinder of a forest with a marked leaf at height r.

    The result has holes [bottom, top]; the bottom hole is represented by the
    dart ending at the marked vertex and the top hole by the dart ending at
    the root of tree 0.
    """
    forest = decomp.forest
    r = forest.height

    if r < 0:
        raise CodecError('empty forest')

    bottom_vertices = forest.generation(r)

    if decomp.marked not in bottom_vertices:
        raise CodecError(f'marked vertex {decomp.marked} is not at height {r}')

    builder = MapBuilder()

    bottom = builder.hole(len(bottom_vertices))

    (top, _) = _stack_layers(builder, forest, decomp.slots, bottom, range(r - 1, -1, -1))

    hole = _close_top(builder, top)

    i = bottom_vertices.index(decomp.marked)

    return builder.build(builder.twin[hole[-1]], holes=[bottom[i], hole[-1]])

def decode_cone(decomp):
    """Build the cone of a forest; its height is one more than the forest's.

    The apex is marked and the top hole is represented by the dart ending at
    the root of tree 0.
    """
    forest = decomp.forest

    if not len(forest):
        return Triangulation.vertex_map()

    builder = MapBuilder()

    (top, layers) = _stack_layers(builder, forest, decomp.slots, [], range(forest.height, -1, -1))

    hole = _close_top(builder, top)

    (apex_dart, _, _) = layers[0][0]

    return builder.build(builder.twin[hole[-1]], holes=[hole[-1]], marked=apex_dart)

def _upper_darts(t, index):
    """The darts b_k = twin(h_k) of hole `index`, starting below the root of tree 0."""
    boundary = t.boundary(index)

    return [t.twin[dart] for dart in boundary[1:] + boundary[:1]]

def cut_polygon(t, first, second, walls, allowed=None):
    """The polygon glued along open darts beginning with `first`, `second`.

    The polygon lies on the left of twin(first) and is bounded by the walls.
    """
    if t.twin[first] == second:
        return Triangulation.edge_map()

    inner = t.twin[first]

    faces = flood_faces(t, inner, allowed, walls)

    (builder, mapping, outer) = extract(t, faces, walls)

    return builder.build(mapping[inner], holes=[outer[inner]])

def _read_layers(t, distance, upper, r, excluded):
    """Read the layers below the cycle of darts `upper`, at distance r.

    Returns the child counts per generation, the slots per (generation, k),
    the vertex ids per generation and the darts of the lowest cycle (those
    that bound the next layer, or the bottom hole).
    """
    nearest = {}

    for dart in range(len(t)):
        face = t.face_of[dart]

        nearest[face] = min(nearest.get(face, r), distance[t.origin(dart)])

    top_face = t.face_of[t.twin[upper[0]]]

    levels = []
    slots = {}
    cycles = []

    for h in range(r, 0, -1):
        allowed = {face for (face, value) in nearest.items()
                   if value >= h - 1 and face not in excluded}
        allowed.add(top_face)

        region = flood_faces(t, t.twin[upper[0]], allowed)

        lower_darts = [dart for dart in range(len(t))
                       if t.face_of[dart] in region and t.face_of[t.twin[dart]] not in region]

        leaving = {}

        for dart in lower_darts:
            if t.origin(dart) in leaving:
                raise CodecError(f'lower cycle at height {h - 1} is not simple')

            leaving[t.origin(dart)] = dart

        c = [t.nxt[b] for b in upper]
        a = [t.nxt[dart] for dart in c]

        for (k, b) in enumerate(upper):
            if t.nxt[a[k]] != b:
                raise CodecError(f'upper edge {k} at height {h} has no down triangle')

        walls = {*a, *c, *upper, *lower_darts}

        counts = []
        sequence = []

        g = r - h

        for k in range(len(upper)):
            slot = cut_polygon(t, a[k - 1], c[k], walls)

            owned = 0 if slot.is_edge_map else slot.perimeter() - 2

            vertex = t.target(c[k - 1])

            for _ in range(owned):
                dart = leaving.get(vertex)

                if dart is None:
                    raise CodecError(f'slot {k} at height {h} leaves the lower cycle')

                sequence.append(dart)
                vertex = t.target(dart)

            if vertex != t.target(c[k]):
                raise CodecError(f'slot {k} at height {h} does not end at its apex')

            counts.append(owned)
            slots[(g, k)] = slot

        if len(sequence) != len(lower_darts):
            raise CodecError(f'slots at height {h} cover {len(sequence)} of '
                             f'{len(lower_darts)} lower edges')

        levels.append(counts)
        cycles.append([t.target(b) for b in upper])

        upper = [t.twin[dart] for dart in sequence]

    return (levels, slots, cycles, upper)

def _decomposition(kind, levels, slots, cycles, marked_index=None):
    forest = PlaneForest.from_levels(levels)

    by_vertex = {forest.generation(g)[k]: slot for ((g, k), slot) in slots.items()}

    marked = None

    if marked_index is not None:
        marked = forest.generation(forest.height)[marked_index]

    return SkeletonDecomp(kind, forest, by_vertex, marked=marked, cycles=cycles)

def encode_cylinder(t):
    """Skeleton decomposition of a triangulation of the cylinder.

    `t` has holes [bottom, top]; the height is the distance from the bottom
    to the top. The marked leaf is the target of the bottom hole dart and
    tree 0 is rooted at the target of the top hole dart.
    """
    if len(t.holes) != 2:
        raise CodecError(f'cylinder has {len(t.holes)} holes')

    bottom = [t.origin(dart) for dart in t.boundary(0)]
    distance = distances(t, bottom)

    r = distance[t.origin(t.holes[1])]

    diagnostics = validate_cylinder(t, r)

    if diagnostics:
        raise CodecError(f'not a cylinder of height {r}: {diagnostics[0]}')

    (levels, slots, cycles, lowest) = _read_layers(t, distance, _upper_darts(t, 1), r,
                                                   {t.face_of[t.holes[0]]})

    if t.holes[0] not in lowest:
        raise CodecError('bottom hole is not the lowest cycle')

    levels.append([0] * len(lowest))
    cycles.append([t.target(dart) for dart in lowest])

    return _decomposition('cylinder', levels, slots, cycles, marked_index=lowest.index(t.holes[0]))

def encode_cone(t):
    """Skeleton decomposition of a triangulation of the cone, apex marked."""
    if t.is_vertex_map:
        return SkeletonDecomp('cone', PlaneForest.empty(), {}, cycles=[])

    if t.marked is None or len(t.holes) != 1:
        raise CodecError('cone requires one hole and a marked apex')

    distance = distances(t, [t.marked_vertex])

    r = distance[t.origin(t.holes[0])]

    diagnostics = validate_cone(t, r)

    if diagnostics:
        raise CodecError(f'not a cone of height {r}: {diagnostics[0]}')

    (levels, slots, cycles, lowest) = _read_layers(t, distance, _upper_darts(t, 0), r, set())

    if lowest:
        raise CodecError('cone has edges below its lowest layer')

    return _decomposition('cone', levels, slots, cycles)

def below_root(forest):
    """The forest of the subtrees below the root of a one-tree forest."""
    if len(forest.trees) != 1:
        raise CodecError(f'expected one tree, found {len(forest.trees)}')

    tree = forest.trees[0]
    bounds = [*forest.children(0), len(tree)]

    return PlaneForest([tree[bounds[i]:bounds[i + 1]] for i in range(len(bounds) - 1)])

def _graft(forest):
    return PlaneForest([[len(forest.trees), *forest.child_counts]])

def _check_kind(decomp, kind):
    if decomp.kind != kind:
        raise CodecError(f'expected a {kind} decomposition, found {decomp.kind}')

    diagnostics = decomp.validate()

    if diagnostics:
        raise CodecError(f'invalid {kind} decomposition: {diagnostics[0]}')

def rho_skeleton(t):
    """ρ-skeleton decomposition of a pointed triangulation of the 1-gon.

    The hull of radius d(ρ, δ) − 1 gives a forest whose roots become the
    children of a new root carrying the ρ-cap. The marked leaf is ρ and sits
    in the first subtree.
    """
    h = pointed_height(t)

    if h < 1:
        raise CodecError('the marked vertex is the root vertex')

    (hull_map, cap_map, _, cap_mapping, hull_outer, cap_outer) = split_hull(t, h - 1)

    decomp = encode_cylinder(hull_map)

    m = decomp.forest.tree_of(decomp.marked)

    if m:
        top = hull_map.boundary(1)[m]

        hull_map = hull_map.with_holes([hull_map.holes[0], top])

        decomp = encode_cylinder(hull_map)

    top = hull_map.holes[1]

    d = next(dart for (dart, new) in hull_outer.items() if new == top)

    cap = cap_map.with_holes([cap_outer[t.twin[d]]], root=cap_mapping[t.twin[d]])

    slots = {vertex + 1: slot for (vertex, slot) in decomp.slots.items()}

    logger.debug(f'ρ-skeleton of height {h} with a cap of perimeter {cap.perimeter()}')

    return SkeletonDecomp('rho', _graft(decomp.forest), slots, marked=decomp.marked + 1, cap=cap)

def rho_unskeleton(decomp):
    """Inverse of rho_skeleton."""
    _check_kind(decomp, 'rho')

    forest = below_root(decomp.forest)
    slots = {vertex - 1: slot for (vertex, slot) in decomp.slots.items()}

    hull_map = decode_cylinder(SkeletonDecomp('cylinder', forest, slots, marked=decomp.marked - 1))

    cap = decomp.cap

    try:
        (builder, a_mapping, b_mapping) = glue(hull_map, hull_map.holes[1], cap, cap.holes[0])
    except MapError as error:
        raise CodecError(f'cannot glue the ρ-cap: {error}') from error

    outside = a_mapping[hull_map.holes[0]]

    return builder.build(builder.twin[outside], holes=[outside], marked=b_mapping[cap.marked])

def delta_skeleton(t):
    """δ-skeleton decomposition of a pointed triangulation of the 1-gon.

    The co-horohull of radius 1 is a cone whose forest hangs below a new root
    carrying the δ-cap, the horohull of radius 1. For d(ρ, δ) = 1 the forest
    is the single root and the δ-cap is t itself.
    """
    h = pointed_height(t)

    if h < 1:
        raise CodecError('the marked vertex is the root vertex')

    (cone, cap) = split_horohull(t, 1)

    cap = cap.with_labels(None)

    if h == 1:
        return SkeletonDecomp('delta', PlaneForest([[0]]), {}, cap=cap)

    decomp = encode_cone(cone)

    slots = {vertex + 1: slot for (vertex, slot) in decomp.slots.items()}

    logger.debug(f'δ-skeleton of height {h} with a cap of perimeter {cone.perimeter()}')

    return SkeletonDecomp('delta', _graft(decomp.forest), slots, cap=cap)

def delta_unskeleton(decomp):
    """Inverse of delta_skeleton."""
    _check_kind(decomp, 'delta')

    cap = decomp.cap

    if decomp.forest.child_counts[0] == 0:
        return cap

    forest = below_root(decomp.forest)
    slots = {vertex - 1: slot for (vertex, slot) in decomp.slots.items()}

    cone = decode_cone(SkeletonDecomp('cone', forest, slots))

    try:
        (builder, a_mapping, b_mapping) = glue(cone, cone.holes[0], cap, cap.nxt[cap.holes[1]])
    except MapError as error:
        raise CodecError(f'cannot glue the δ-cap: {error}') from error

    return builder.build(b_mapping[cap.root], holes=[b_mapping[cap.holes[0]]],
                         marked=a_mapping[cone.marked])

def skeleton_size(decomp):
    """Vertex count of the map a decomposition describes."""
    inner = sum(slot.inner_vertex_count() for slot in decomp.slots.values() if not slot.is_edge_map)

    forest = decomp.forest

    if decomp.kind == 'cone':
        return 1 + len(forest) + inner

    if decomp.kind == 'cylinder':
        return len(forest) + inner

    cap = decomp.cap

    if decomp.kind == 'rho':
        return len(forest) - 1 + inner + cap.vertex_count - cap.perimeter()

    p = forest.child_counts[0]

    return len(forest) - 1 + inner + cap.vertex_count - p - (1 if p == 0 else 0) + 1
