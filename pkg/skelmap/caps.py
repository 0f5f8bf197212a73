"""
skelmap.caps
~~~~~~~~~~~~

Decompositions of δ-caps and ρ-caps into polygon triangulations.

A δ-cap of perimeter p is a triangulation of the 1-gon (the root loop at ρ)
with a second hole of perimeter p, the horohull of radius one of a pointed
map; for p = 0 the hole shrinks to the marked vertex.
The triangles adjacent to ρ whose third vertex lies beyond the first boundary
edge form a crown; the crown slots are triangulations of the 2-gon and the
rest of the cap is one polygon triangulation.

A ρ-cap of perimeter p is a triangulation of the p-gon with an inner marked
vertex δ adjacent to the boundary. Around δ, the sector containing the root
face is a crown of triangles with 2-gon slots, closed by two triangulations
of polygons on either side.
"""

import logging
from collections import namedtuple

from .skeleton import CodecError, cut_polygon
from .triangulation import MapBuilder, MapError, canonical_code, flood_faces

logger = logging.getLogger(__name__)

class DeltaCapParts(namedtuple('DeltaCapParts', ['two_gons', 'polygon'])):
    def codes(self):
        return (tuple(canonical_code(t) for t in self.two_gons), canonical_code(self.polygon))

class RhoCapParts(namedtuple('RhoCapParts', ['k', 'j', 'two_gons', 'left', 'right'])):
    """Parts of a ρ-cap.

    `left` is a triangulation of the (k + i)-gon and `right` one of the
    (p − k + 2)-gon, where i − 1 = len(two_gons). The root is the j-th
    boundary edge of the left side, 1 <= j <= k <= p.
    """

    @property
    def i(self):
        return len(self.two_gons) + 1

    @property
    def perimeter(self):
        return self.left.perimeter() + self.right.perimeter() - self.i - 2

    def codes(self):
        return (self.k, self.j, tuple(canonical_code(t) for t in self.two_gons),
                canonical_code(self.left), canonical_code(self.right))

def _fill(builder, polygon, open_darts, name):
    try:
        builder.fill(polygon, open_darts)
    except MapError as error:
        raise CodecError(f'{name}: {error}') from error

def _crown(builder, count):
    triangles = [builder.face(3) for _ in range(count)]

    return tuple([triangle[index] for triangle in triangles] for index in range(3))

def compose_delta_cap(parts):
    """Assemble a δ-cap from k >= 1 triangulations of the 2-gon and one of the (p + k + 1)-gon.

    The result has holes [outside, hole], the hole dart ending at v1, and is
    rooted inside the loop. For p = 0 there is no second hole and the vertex
    that replaces it is marked.
    """
    (two_gons, polygon) = parts
    k = len(two_gons)

    if k < 1:
        raise CodecError('a δ-cap has at least one crown triangle')

    p = polygon.perimeter() - k - 1

    if p < 0:
        raise CodecError(f'polygon perimeter {polygon.perimeter()} is too small for {k} triangles')

    builder = MapBuilder()

    outside = builder.dart()
    builder.nxt[outside] = outside

    (a, b, c) = _crown(builder, k)

    for j in range(k - 1):
        _fill(builder, two_gons[j], [a[j], c[j + 1]], f'slot {j}')

    _fill(builder, two_gons[k - 1], [a[k - 1], outside], f'slot {k - 1}')

    hole = builder.face(p) if p else []

    _fill(builder, polygon, [c[0], *reversed(hole), *b], 'polygon')

    root = builder.twin[outside]

    if p:
        return builder.build(root, holes=[outside, hole[-1]])

    return builder.build(root, holes=[outside], marked=c[0])

def _hole_vertices(cap):
    if len(cap.holes) >= 2:
        return {cap.origin(dart) for dart in cap.boundary(1)}

    if cap.marked is None:
        raise CodecError('a δ-cap of perimeter 0 needs a marked vertex')

    return {cap.marked_vertex}

def first_boundary_edge(cap):
    """The first dart around ρ, counterclockwise from the root, ending on the hole."""
    targets = _hole_vertices(cap)

    current = cap.sigma_inverse(cap.root)

    while current != cap.root:
        if cap.target(current) in targets:
            return current

        current = cap.sigma_inverse(current)

    raise CodecError('ρ is not adjacent to the hole')

def anchor_delta_cap(cap):
    """Represent the hole of a δ-cap by the dart ending at v1."""
    if len(cap.holes) < 2:
        return cap

    v1 = cap.target(first_boundary_edge(cap))

    dart = next(dart for dart in cap.boundary(1) if cap.target(dart) == v1)

    return cap.with_holes([cap.holes[0], dart])

def _check_delta_cap(cap):
    if not cap.holes or cap.perimeter(0) != 1:
        raise CodecError('a δ-cap is bounded by the root loop')

    if cap.root != cap.twin[cap.holes[0]]:
        raise CodecError('a δ-cap is rooted inside its loop')

    if len(cap.holes) > 2:
        raise CodecError(f'a δ-cap has at most two holes, found {len(cap.holes)}')

    if cap.root_vertex in _hole_vertices(cap):
        raise CodecError('ρ lies on the hole')

def _sector(cap, start, stop):
    """Darts around a vertex from `start` to `stop` in clockwise order, both included."""
    darts = [start]

    while True:
        current = cap.sigma(darts[-1])
        darts.append(current)

        if current == stop:
            return darts

        if current == start:
            raise CodecError('sector does not close')

def _crown_walk(cap, first, sector, done):
    """Walk the crown triangles of a sector.

    `first` is C_0; each A_m is followed by the last dart of the sector ending
    at the target of A_m, whose twin is C_{m+1}. Returns (A, C).
    """
    a = [cap.nxt[first]]
    c = [first]

    position = 0

    while not done(a[-1]):
        u = cap.target(a[-1])

        following = [index for index in range(position + 1, len(sector))
                     if cap.target(sector[index]) == u]

        if not following or len(a) > len(sector):
            raise CodecError(f'crown walk lost at vertex {u}')

        position = following[-1]

        c.append(cap.twin[sector[position]])
        a.append(cap.sigma(sector[position]))

    return (a, c)

def decompose_delta_cap(cap):
    """Inverse of compose_delta_cap."""
    _check_delta_cap(cap)

    rho = cap.root_vertex
    p = cap.perimeter(1) if len(cap.holes) == 2 else 0

    e = first_boundary_edge(cap)

    if p and cap.target(cap.holes[1]) != cap.target(e):
        raise CodecError('hole is not represented by the dart ending at v1')

    c0 = cap.twin[e]

    sector = _sector(cap, e, cap.root)

    (a, c) = _crown_walk(cap, c0, sector, lambda dart: cap.target(dart) == rho)

    k = len(a)
    b = [cap.nxt[dart] for dart in a]

    two_gons = []

    for j in range(k - 1):
        two_gons.append(cut_polygon(cap, a[j], c[j + 1], {a[j], c[j + 1]}))

    two_gons.append(cut_polygon(cap, a[k - 1], cap.holes[0], {a[k - 1], cap.root}))

    second = cap.holes[1] if p else b[0]

    inner = set(cap.inner_faces)

    polygon = cut_polygon(cap, c0, second, {c0, *b}, inner)

    if polygon.perimeter() != p + k + 1:
        raise CodecError(f'polygon has perimeter {polygon.perimeter()}, expected {p + k + 1}')

    return DeltaCapParts(two_gons, polygon)

def compose_rho_cap(parts):
    """Assemble a ρ-cap, marked at δ and rooted on the j-th edge of the left arc."""
    (k, j, two_gons, left, right) = parts

    i = parts.i
    p = parts.perimeter

    if left.perimeter() != k + i:
        raise CodecError(f'left polygon has perimeter {left.perimeter()}, expected {k + i}')

    if not 1 <= j <= k <= p:
        raise CodecError(f'invalid root position j={j}, k={k}, p={p}')

    builder = MapBuilder()

    hole = builder.face(p)

    (a, b, c) = _crown(builder, i)

    for m in range(i - 1):
        _fill(builder, two_gons[m], [a[m], c[m + 1]], f'slot {m}')

    _fill(builder, left, [*b, *reversed(hole[:k])], 'left polygon')
    _fill(builder, right, [c[0], *reversed(hole[k:]), a[i - 1]], 'right polygon')

    return builder.build(builder.twin[hole[j - 1]], holes=[hole[j - 1]], marked=a[0])

def decompose_rho_cap(cap):
    """Inverse of compose_rho_cap."""
    if len(cap.holes) != 1 or cap.marked is None:
        raise CodecError('a ρ-cap has one hole and a marked vertex')

    delta = cap.marked_vertex
    boundary = {cap.origin(dart) for dart in cap.boundary()}

    if delta in boundary:
        raise CodecError('δ lies on the boundary')

    spokes = [dart for dart in cap.rotation(cap.marked) if cap.target(dart) in boundary]

    if not spokes:
        raise CodecError('δ is not adjacent to the boundary')

    walls = set(spokes)
    inner = set(cap.inner_faces)
    root_face = cap.face_of[cap.root]

    for (index, d) in enumerate(spokes):
        region = flood_faces(cap, cap.twin[d], inner, walls)

        if root_face in region:
            last = spokes[(index + 1) % len(spokes)]
            break
    else:
        raise CodecError('root face is not next to δ')

    c0 = cap.twin[d]

    sector = _sector(cap, d, last)

    (a, c) = _crown_walk(cap, c0, sector, lambda dart: dart == last)

    i = len(a)
    b = [cap.nxt[dart] for dart in a]

    two_gons = [cut_polygon(cap, a[m], c[m + 1], {a[m], c[m + 1]}) for m in range(i - 1)]

    start = next(dart for dart in cap.boundary() if cap.origin(dart) == cap.target(d))

    arc = [start]

    while len(arc) < len(boundary) and cap.face_of[cap.twin[cap.nxt[arc[-1]]]] in region:
        arc.append(cap.nxt[arc[-1]])

    if cap.face_of[cap.twin[start]] not in region:
        raise CodecError('crown does not reach the boundary after δ')

    k = len(arc)
    p = len(boundary)

    left_second = b[1] if i >= 2 else arc[-1]
    left = cut_polygon(cap, b[0], left_second, set(b), inner)

    right_second = cap.prev[start] if k < p else a[i - 1]
    right = cut_polygon(cap, c0, right_second, {c0, last}, inner)

    if cap.holes[0] not in arc:
        raise CodecError('root is not on the crown side of the boundary')

    return RhoCapParts(k, arc.index(cap.holes[0]) + 1, two_gons, left, right)
