"""
skelmap.triangulation
~~~~~~~~~~~~~~~~~~~~~
"""

import logging
from collections import Counter, deque
from functools import cached_property
from more_itertools import first_true

logger = logging.getLogger(__name__)

class MapError(Exception):
    """Malformed dart structure."""

class ValidationError(MapError):
    """Map failed validation."""

    def __init__(self, diagnostics):
        self.diagnostics = diagnostics

        super().__init__(f'invalid map: {diagnostics[0]}' if diagnostics else 'invalid map')

class MapCode:
    """Canonical byte code of a rooted map."""

    def __init__(self, data):
        self.data = bytes(data)

    def hex(self):
        return self.data.hex()

    @classmethod
    def from_hex(cls, value):
        return cls(bytes.fromhex(value))

    def __eq__(self, other):
        return isinstance(other, MapCode) and self.data == other.data

    def __lt__(self, other):
        return self.data < other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return f'<MapCode {self.data[:24].decode("ascii", "replace")}...>'

class Triangulation:
    """A rooted planar map given by two dart permutations.

    Each dart carries the face on its left. `twin` is the fixed-point free
    involution pairing the two darts of an edge, `nxt` follows the face on the
    left. Vertices are the orbits of `nxt[twin[d]]`, the origin of a dart is
    the vertex it leaves from.

    `holes` lists one dart per hole face, with the hole on its left. `marked`
    is a dart leaving the marked vertex. `labels`, when present, is an integer
    per dart (the label of its origin).
    """

    def __init__(self, twin, nxt, root=None, holes=(), marked=None, labels=None):
        self.twin = tuple(twin)
        self.nxt = tuple(nxt)
        self.root = root
        self.holes = tuple(holes)
        self.marked = marked
        self.labels = tuple(labels) if labels is not None else None

        if len(self.twin) != len(self.nxt):
            raise MapError('twin and next have different lengths')

        if self.twin and root is None:
            raise MapError('a map with darts requires a root')

    @classmethod
    def vertex_map(cls):
        """The map reduced to a single (marked) vertex."""
        return cls((), ())

    @classmethod
    def edge_map(cls):
        """The edge triangulation of the 2-gon."""
        return cls((1, 0), (1, 0), root=1, holes=(0,))

    def __len__(self):
        return len(self.twin)

    def __repr__(self):
        return (f'<Triangulation darts={len(self)} vertices={self.vertex_count} '
                f'holes={[self.perimeter(i) for i in range(len(self.holes))]}>')

    @property
    def is_vertex_map(self):
        return not self.twin

    @property
    def is_edge_map(self):
        return len(self.twin) == 2 and self.nxt == (1, 0) and len(self.holes) == 1

    @cached_property
    def prev(self):
        prev = [0] * len(self.nxt)

        for (dart, following) in enumerate(self.nxt):
            prev[following] = dart

        return tuple(prev)

    def sigma(self, dart):
        """Next dart around the origin of `dart`."""
        return self.nxt[self.twin[dart]]

    def sigma_inverse(self, dart):
        return self.twin[self.prev[dart]]

    @cached_property
    def vertex_of(self):
        vertex_of = [None] * len(self.twin)
        count = 0

        for dart in range(len(self.twin)):
            if vertex_of[dart] is not None:
                continue

            current = dart

            while vertex_of[current] is None:
                vertex_of[current] = count
                current = self.sigma(current)

            count += 1

        return tuple(vertex_of)

    @property
    def vertex_count(self):
        if self.is_vertex_map:
            return 1

        return max(self.vertex_of) + 1

    @property
    def edge_count(self):
        return len(self.twin) // 2

    def origin(self, dart):
        return self.vertex_of[dart]

    def target(self, dart):
        return self.vertex_of[self.twin[dart]]

    @cached_property
    def face_of(self):
        face_of = [None] * len(self.nxt)
        count = 0

        for dart in range(len(self.nxt)):
            if face_of[dart] is not None:
                continue

            current = dart

            while face_of[current] is None:
                face_of[current] = count
                current = self.nxt[current]

            count += 1

        return tuple(face_of)

    @property
    def face_count(self):
        return max(self.face_of) + 1 if self.face_of else 0

    def face(self, dart):
        return self.face_of[dart]

    def face_darts(self, dart):
        """Darts of the face on the left of `dart`, starting at `dart`."""
        darts = [dart]
        current = self.nxt[dart]

        while current != dart:
            darts.append(current)
            current = self.nxt[current]

        return darts

    @cached_property
    def hole_faces(self):
        return frozenset(self.face_of[dart] for dart in self.holes)

    @cached_property
    def inner_faces(self):
        return [face for face in range(self.face_count) if face not in self.hole_faces]

    def is_hole_dart(self, dart):
        return self.face_of[dart] in self.hole_faces

    def boundary(self, index=0):
        """Darts of a hole in face order, starting at its representative."""
        return self.face_darts(self.holes[index])

    def perimeter(self, index=0):
        return len(self.face_darts(self.holes[index]))

    def rotation(self, dart):
        """Darts leaving the origin of `dart`, in rotation order."""
        darts = [dart]
        current = self.sigma(dart)

        while current != dart:
            darts.append(current)
            current = self.sigma(current)

        return darts

    @property
    def marked_vertex(self):
        if self.is_vertex_map:
            return 0

        return None if self.marked is None else self.origin(self.marked)

    @property
    def root_vertex(self):
        return 0 if self.is_vertex_map else self.origin(self.root)

    def vertex_labels(self):
        """Labels per vertex, or None."""
        if self.labels is None:
            return None

        labels = [None] * self.vertex_count

        for (dart, label) in enumerate(self.labels):
            labels[self.origin(dart)] = label

        return labels

    def inner_vertex_count(self):
        """Number of vertices not on any hole."""
        on_holes = set()

        for index in range(len(self.holes)):
            on_holes.update(self.origin(dart) for dart in self.boundary(index))

        return self.vertex_count - len(on_holes)

    def with_holes(self, holes, root=None):
        return Triangulation(self.twin, self.nxt, root=self.root if root is None else root,
                             holes=holes, marked=self.marked, labels=self.labels)

    def with_marked(self, marked):
        return Triangulation(self.twin, self.nxt, root=self.root, holes=self.holes,
                             marked=marked, labels=self.labels)

    def with_labels(self, labels):
        return Triangulation(self.twin, self.nxt, root=self.root, holes=self.holes,
                             marked=self.marked, labels=labels)

class MapBuilder:
    """Incrementally assembles a Triangulation."""

    def __init__(self):
        self.twin = []
        self.nxt = []

    def __len__(self):
        return len(self.twin)

    def dart(self):
        self.twin.append(None)
        self.nxt.append(None)

        return len(self.twin) - 1

    def face(self, degree):
        """Create `degree` unlinked darts forming one face."""
        darts = [self.dart() for _ in range(degree)]

        for (index, dart) in enumerate(darts):
            self.nxt[dart] = darts[(index + 1) % degree]

        return darts

    def hole(self, degree):
        """Create a hole face whose darts satisfy nxt[f_i] = f_{i-1}."""
        darts = [self.dart() for _ in range(degree)]

        for index in range(degree):
            self.nxt[darts[index]] = darts[index - 1]

        return darts

    def link(self, a, b):
        if self.twin[a] is not None or self.twin[b] is not None:
            raise MapError(f'dart already linked: {a} or {b}')

        self.twin[a] = b
        self.twin[b] = a

    def add(self, t, skip=()):
        """Copy darts of `t`, except `skip`, keeping links between copied darts."""
        skip = set(skip)
        mapping = {}

        for dart in range(len(t)):
            if dart not in skip:
                mapping[dart] = self.dart()

        for (dart, new) in mapping.items():
            if t.nxt[dart] in mapping:
                self.nxt[new] = mapping[t.nxt[dart]]

            if t.twin[dart] in mapping:
                self.twin[new] = mapping[t.twin[dart]]

        return mapping

    def fill(self, polygon, open_darts):
        """Glue a polygon triangulation into the open darts.

        The open darts must satisfy target(o_{j+1}) = origin(o_j), cyclically,
        and carry the already built region on their left.
        """
        if polygon.perimeter() != len(open_darts):
            raise MapError(f'perimeter mismatch: {polygon.perimeter()} != {len(open_darts)}')

        if polygon.is_edge_map:
            self.link(open_darts[0], open_darts[1])

            return {}

        hole = polygon.boundary()

        mapping = self.add(polygon, skip=hole)

        inner = polygon.twin[hole[0]]

        for opened in open_darts:
            self.link(mapping[inner], opened)

            inner = polygon.twin[polygon.prev[polygon.twin[inner]]]

        return mapping

    def build(self, root, holes=(), marked=None, labels=None):
        unlinked = first_true(range(len(self.twin)),
                              pred=lambda dart: self.twin[dart] is None or self.nxt[dart] is None)

        if unlinked is not None:
            raise MapError(f'dart {unlinked} is not linked')

        return Triangulation(self.twin, self.nxt, root=root, holes=holes, marked=marked,
                             labels=labels)

def glue(a_map, a, b_map, b):
    """Glue the hole of `a` in `a_map` to the hole of `b` in `b_map`.

    Hole darts a_{i+1} = nxt(a_i) are paired with b_{i+1} = prev(b_i); the
    requirement is that `a` and `b` describe the same edge in opposite
    directions. Returns (builder, a_mapping, b_mapping).
    """
    a_hole = a_map.face_darts(a)
    b_hole = [b]

    while len(b_hole) < len(a_hole):
        b_hole.append(b_map.prev[b_hole[-1]])

    if b_map.prev[b_hole[-1]] != b:
        raise MapError(f'hole perimeters differ: {len(a_hole)} != {len(b_map.face_darts(b))}')

    a_set = set(a_hole)

    for dart in a_hole:
        if a_map.twin[dart] in a_set:
            raise MapError('hole is glued to itself')

    builder = MapBuilder()

    a_mapping = builder.add(a_map, skip=a_hole)
    b_mapping = builder.add(b_map, skip=b_hole)

    for (x, y) in zip(a_hole, b_hole):
        builder.link(a_mapping[a_map.twin[x]], b_mapping[b_map.twin[y]])

    return (builder, a_mapping, b_mapping)

def extract(t, faces, walls=()):
    """Extract the sub-map formed by a set of faces.

    Every dart of the region whose twin lies outside, or whose edge is one of
    `walls`, gets a new twin in a hole face. Returns (builder, mapping, outer)
    where `outer` maps such region darts to their new twins.
    """
    faces = set(faces)
    walls = set(walls)

    region = [dart for dart in range(len(t)) if t.face_of[dart] in faces]

    builder = MapBuilder()

    mapping = {dart: builder.dart() for dart in region}

    outer = {}

    for dart in region:
        if t.face_of[t.twin[dart]] not in faces or dart in walls or t.twin[dart] in walls:
            outer[dart] = builder.dart()

    for dart in region:
        builder.nxt[mapping[dart]] = mapping[t.nxt[dart]]

        if dart in outer:
            builder.twin[mapping[dart]] = outer[dart]
            builder.twin[outer[dart]] = mapping[dart]
        else:
            builder.twin[mapping[dart]] = mapping[t.twin[dart]]

    for (dart, new) in outer.items():
        # Rotate through the region around the origin of `dart` up to the next
        # cut edge, so that a vertex where the region touches itself splits.
        current = t.sigma_inverse(dart)

        while t.twin[current] not in outer:
            current = t.sigma_inverse(current)

        builder.nxt[new] = outer[t.twin[current]]

    return (builder, mapping, outer)

def face_components(t, faces, walls=()):
    """Split faces into components connected across edges, never across walls."""
    faces = set(faces)
    walls = set(walls)

    first_dart = {}

    for (dart, face) in enumerate(t.face_of):
        first_dart.setdefault(face, dart)

    seen = set()
    components = []

    for face in sorted(faces):
        if face in seen:
            continue

        component = flood_faces(t, first_dart[face], faces, walls)

        seen.update(component)
        components.append(component)

    return components

def flood_faces(t, dart, allowed=None, walls=()):
    """Faces reachable from the face of `dart` without crossing walls."""
    walls = set(walls)

    start = t.face_of[dart]
    component = {start}
    queue = deque([dart])

    while queue:
        for current in t.face_darts(queue.popleft()):
            if current in walls or t.twin[current] in walls:
                continue

            neighbor = t.twin[current]
            face = t.face_of[neighbor]

            if face in component or (allowed is not None and face not in allowed):
                continue

            component.add(face)
            queue.append(neighbor)

    return component

def distances(t, sources):
    """Graph distances from a set of vertices."""
    if t.is_vertex_map:
        return [0]

    adjacency = [[] for _ in range(t.vertex_count)]

    for dart in range(len(t)):
        adjacency[t.origin(dart)].append(t.target(dart))

    result = [None] * t.vertex_count
    queue = deque()

    for source in sources:
        result[source] = 0
        queue.append(source)

    while queue:
        vertex = queue.popleft()

        for neighbor in adjacency[vertex]:
            if result[neighbor] is None:
                result[neighbor] = result[vertex] + 1
                queue.append(neighbor)

    return result

def canonical_labels(t):
    """Breadth-first dart labels from the root, following next then twin."""
    labels = [None] * len(t)

    if t.is_vertex_map:
        return labels

    labels[t.root] = 0
    queue = deque([t.root])
    count = 1

    while queue:
        dart = queue.popleft()

        for neighbor in (t.nxt[dart], t.twin[dart]):
            if labels[neighbor] is None:
                labels[neighbor] = count
                count += 1
                queue.append(neighbor)

    return labels

def canonical_vertex_labels(t):
    """Per vertex, the smallest canonical label of a dart leaving it."""
    labels = canonical_labels(t)
    vertex_labels = [None] * t.vertex_count

    for (dart, label) in enumerate(labels):
        vertex = t.origin(dart)

        if vertex_labels[vertex] is None or label < vertex_labels[vertex]:
            vertex_labels[vertex] = label

    return vertex_labels

def canonical_code(t):
    """Root preserving isomorphism invariant of a map."""
    if t.is_vertex_map:
        return MapCode(b'V')

    labels = canonical_labels(t)

    if None in labels:
        raise MapError('map is not connected')

    order = sorted(range(len(t)), key=lambda dart: labels[dart])

    fields = [len(t)]

    for dart in order:
        fields.append(labels[t.twin[dart]])
        fields.append(labels[t.nxt[dart]])

    fields.append(len(t.holes))
    fields.extend(labels[dart] for dart in t.holes)

    if t.marked is None:
        fields.append(-1)
    else:
        vertex = t.origin(t.marked)

        fields.append(min(labels[dart] for dart in range(len(t)) if t.origin(dart) == vertex))

    return MapCode(','.join(str(field) for field in fields).encode('ascii'))

def anchor_dart(t, index):
    """The hole dart whose target is the anchor of hole `index`.

    The anchor is the boundary vertex with the smallest canonical label.
    """
    vertex_labels = canonical_vertex_labels(t)

    return min(t.boundary(index), key=lambda dart: vertex_labels[t.target(dart)])

def anchored(t, index):
    """Re-represent hole `index` by its anchor dart."""
    holes = list(t.holes)
    holes[index] = anchor_dart(t, index)

    return t.with_holes(holes)

def validate(t):
    """Check the structural invariants and return diagnostics, empty if valid."""
    diagnostics = []

    if t.is_vertex_map:
        return diagnostics

    size = len(t)

    for dart in range(size):
        twin = t.twin[dart]

        if not 0 <= twin < size or twin == dart or t.twin[twin] != dart:
            diagnostics.append(f'dart {dart}: twin is not a fixed-point free involution')

            return diagnostics

    if sorted(t.nxt) != list(range(size)):
        diagnostics.append('next is not a permutation')

        return diagnostics

    if not 0 <= t.root < size:
        diagnostics.append(f'root {t.root} out of range')

        return diagnostics

    if None in canonical_labels(t):
        diagnostics.append('map is not connected')

        return diagnostics

    hole_faces = [t.face_of[dart] for dart in t.holes]

    if len(set(hole_faces)) != len(hole_faces):
        diagnostics.append('two holes share a face')

    euler = t.vertex_count - t.edge_count + t.face_count

    if euler != 2:
        diagnostics.append(f'euler characteristic is {euler}')

    degrees = Counter(t.face_of)

    for face in t.inner_faces:
        degree = degrees[face]

        if degree != 3 and not _is_degenerate_sphere(t):
            diagnostics.append(f'face {face} has degree {degree}')

            break

    for index in range(len(t.holes)):
        if t.is_edge_map:
            continue

        vertices = [t.origin(dart) for dart in t.boundary(index)]

        if len(set(vertices)) != len(vertices):
            diagnostics.append(f'hole {index} is not a simple cycle')

    if t.marked is not None and not 0 <= t.marked < size:
        diagnostics.append(f'marked dart {t.marked} out of range')

    if t.labels is not None:
        labels = t.labels

        for dart in range(size):
            if labels[dart] != labels[t.sigma(dart)]:
                diagnostics.append(f'dart {dart}: label differs around its vertex')

                break

            if abs(labels[dart] - labels[t.twin[dart]]) > 1:
                diagnostics.append(f'dart {dart}: labels differ by more than one')

                break

    return diagnostics

def _is_degenerate_sphere(t):
    return len(t) == 2 and not t.holes

def validate_cylinder(t, height):
    """Diagnostics for a triangulation of the cylinder; holes = [bottom, top]."""
    diagnostics = validate(t)

    if diagnostics:
        return diagnostics

    if len(t.holes) != 2:
        return [f'cylinder has {len(t.holes)} holes']

    bottom = [t.origin(dart) for dart in t.boundary(0)]
    top = t.boundary(1)

    if height == 0:
        if {t.origin(dart) for dart in top} != set(bottom):
            diagnostics.append('height 0 cylinder with distinct boundaries')

        return diagnostics

    distance = distances(t, bottom)

    for dart in top:
        if distance[t.origin(dart)] != height:
            diagnostics.append(f'top vertex {t.origin(dart)} at distance {distance[t.origin(dart)]}')

            return diagnostics

        apex = t.target(t.nxt[t.twin[dart]])

        if t.is_hole_dart(t.twin[dart]) or distance[apex] != height - 1:
            diagnostics.append(f'top edge at dart {dart} has no down triangle')

            return diagnostics

    return diagnostics

def validate_cone(t, height):
    """Diagnostics for a triangulation of the cone; the apex is the marked vertex."""
    if height == 0:
        return [] if t.is_vertex_map else ['height 0 cone is not the vertex map']

    diagnostics = validate(t)

    if diagnostics:
        return diagnostics

    if t.marked is None or len(t.holes) != 1:
        return ['cone requires one hole and a marked vertex']

    distance = distances(t, [t.marked_vertex])

    for dart in t.boundary(0):
        if distance[t.origin(dart)] != height:
            diagnostics.append(f'top vertex {t.origin(dart)} at distance {distance[t.origin(dart)]}')

            return diagnostics

        apex = t.target(t.nxt[t.twin[dart]])

        if distance[apex] != height - 1:
            diagnostics.append(f'top edge at dart {dart} has no down triangle')

            return diagnostics

    return diagnostics

def root_transform(sphere):
    """Turn a rooted sphere triangulation into a triangulation of the 1-gon.

    The root edge is doubled and a loop is inserted in the resulting 2-gon;
    the loop becomes the boundary. Works unchanged when the root is a loop.
    """
    if sphere.holes:
        raise MapError('root transform expects a sphere')

    builder = MapBuilder()

    if _is_degenerate_sphere(sphere):
        (x, loop, y) = builder.face(3)
        outside = builder.dart()

        builder.nxt[outside] = outside

        builder.link(x, y)
        builder.link(loop, outside)

        marked = None

        if sphere.marked is not None:
            marked = loop if sphere.marked == sphere.root else x

        return builder.build(loop, holes=[outside], marked=marked)

    mapping = builder.add(sphere)

    root = mapping[sphere.root]
    root_twin = mapping[sphere.twin[sphere.root]]

    builder.twin[root] = None
    builder.twin[root_twin] = None

    (x, loop, y) = builder.face(3)
    outside = builder.dart()

    builder.nxt[outside] = outside

    builder.link(root, x)
    builder.link(root_twin, y)
    builder.link(loop, outside)

    marked = None if sphere.marked is None else mapping[sphere.marked]

    return builder.build(loop, holes=[outside], marked=marked)

def inverse_root_transform(one_gon):
    """Inverse of root_transform."""
    if len(one_gon.holes) != 1 or one_gon.perimeter() != 1:
        raise MapError('inverse root transform expects a triangulation of the 1-gon')

    loop = one_gon.root
    y = one_gon.nxt[loop]
    x = one_gon.nxt[y]

    removed = {loop, one_gon.holes[0], x, y}

    if one_gon.twin[x] == y:
        marked = None

        if one_gon.marked is not None:
            marked = 0 if one_gon.origin(one_gon.marked) == one_gon.origin(loop) else 1

        # The degenerate sphere made of a single edge.
        return Triangulation((1, 0), (1, 0), root=0, marked=marked)

    builder = MapBuilder()

    mapping = builder.add(one_gon, skip=removed)

    root = mapping[one_gon.twin[x]]

    builder.link(root, mapping[one_gon.twin[y]])

    marked = None

    if one_gon.marked is not None:
        marked = _surviving_dart(one_gon, one_gon.marked, mapping)

    return builder.build(root, marked=marked)

def _surviving_dart(t, dart, mapping):
    for candidate in t.rotation(dart):
        if candidate in mapping:
            return mapping[candidate]

    raise MapError('marked vertex has no surviving dart')

def vertex_darts(t, vertex):
    """Darts leaving a vertex."""
    return [dart for dart in range(len(t)) if t.origin(dart) == vertex]
