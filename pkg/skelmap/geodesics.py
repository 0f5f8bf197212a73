"""
skelmap.geodesics
~~~~~~~~~~~~~~~~~

Left-most and right-most geodesics down triangulations of the cylinder, and
the event forcing all geodesics through one vertex.

Heights are distances from the bottom cycle. Take a vertex on the
generation cycle at height h and turn clockwise from the edge to its right
neighbour on that cycle. The darts to height h - 1 start with the edge of the
down triangle on its right and end with the edge of the down triangle on its
left; inner vertices of the slot between them may sit at height h, so the
darts in between need not be consecutive. The right-most geodesic follows the
first, the left-most geodesic the last. On generation cycles, listed left to
right like the skeleton forest, a step of the left-most geodesic from the
k-th vertex reaches the first child of that vertex and a step of the
right-most geodesic the first child of the next one.
"""

import logging
from collections import namedtuple
from more_itertools import first_true, pairwise

from .peeling import EDGE, build_polygon, split
from .skeleton import encode_cylinder
from .triangulation import MapBuilder, MapError, ValidationError, distances, validate_cylinder

logger = logging.getLogger(__name__)

LEFTMOST = 'leftmost'
RIGHTMOST = 'rightmost'

SIDES = (LEFTMOST, RIGHTMOST)

class GeodesicPath(namedtuple('GeodesicPath', ['vertices', 'side', 'top'])):
    """Vertices from height `top` down to the bottom cycle, one per height."""

    def at(self, height):
        index = self.top - height

        if not 0 <= index < len(self.vertices):
            return None

        return self.vertices[index]

class Cylinder:
    """A validated triangulation of the cylinder with its heights."""

    def __init__(self, t):
        if len(t.holes) != 2:
            raise MapError(f'cylinder has {len(t.holes)} holes')

        self.t = t

        self.heights = distances(t, [t.origin(dart) for dart in t.boundary(0)])
        self.height = self.heights[t.origin(t.holes[1])]

        diagnostics = validate_cylinder(t, self.height)

        if diagnostics:
            raise ValidationError(diagnostics)

        self._darts = {}

        for dart in range(len(t)):
            self._darts.setdefault(t.origin(dart), dart)

        self._cycles = None
        self._positions = None

    def __repr__(self):
        return f'<Cylinder height={self.height} vertices={self.t.vertex_count}>'

    @property
    def top(self):
        """Top cycle vertices, left to right."""
        return self.cycles[0]

    @property
    def cycles(self):
        """Vertices per generation, from the top (height r) to the bottom (height 0)."""
        if self._cycles is None:
            self._cycles = encode_cylinder(self.t).cycles

        return self._cycles

    def cycle_at(self, height):
        return self.cycles[self.height - height]

    def position(self, vertex):
        """Index of `vertex` on the generation cycle at its height."""
        if self._positions is None:
            self._positions = {u: index for cycle in self.cycles for (index, u) in enumerate(cycle)}

        index = self._positions.get(vertex)

        if index is None:
            raise MapError(f'vertex {vertex} is not on a generation cycle')

        return index

    def down_darts(self, vertex):
        """Darts from a cycle vertex to the next height down, in clockwise order.

        The rotation starts after the edge to the right neighbour on the cycle.
        """
        t = self.t

        height = self.heights[vertex]

        if height == 0:
            return []

        cycle = self.cycle_at(height)
        right = cycle[(self.position(vertex) + 1) % len(cycle)]

        level = height - 1

        start = first_true(t.rotation(self._darts[vertex]),
                           pred=lambda dart: t.target(dart) == right and self.heights[t.target(t.sigma(dart))] == level)

        if start is None:
            raise MapError(f'vertex {vertex} has no down triangle towards {right}')

        return [dart for dart in t.rotation(start) if self.heights[t.target(dart)] == level]

    def down_neighbours(self, vertex):
        t = self.t

        level = self.heights[vertex] - 1

        return [t.target(dart) for dart in t.rotation(self._darts[vertex]) if self.heights[t.target(dart)] == level]

    def reachable(self, sources):
        """Vertices per height lying on a geodesic from one of `sources` to the bottom."""
        levels = {}

        frontier = set(sources)

        while frontier:
            height = self.heights[next(iter(frontier))]

            levels[height] = frontier

            if height == 0:
                break

            frontier = {target for vertex in frontier for target in self.down_neighbours(vertex)}

        return levels

def trace_geodesic(cylinder, vertex, side):
    """Follow the extremal down edge from `vertex` to the bottom cycle."""
    if side not in SIDES:
        raise ValueError(f'invalid side: {side}')

    top = cylinder.heights[vertex]

    vertices = [vertex]

    while cylinder.heights[vertices[-1]] > 0:
        block = cylinder.down_darts(vertices[-1])

        dart = block[0] if side == RIGHTMOST else block[-1]

        vertices.append(cylinder.t.target(dart))

    return GeodesicPath(tuple(vertices), side, top)

def coalescence_vertex(g1, g2):
    """The highest (vertex, height) shared by two geodesics, or None."""
    top = min(g1.top, g2.top)

    return first_true(((g1.at(height), height) for height in range(top, -1, -1)),
                      pred=lambda pair: pair[0] is not None and pair[0] == g2.at(pair[1]))

def _between(position, left, right, size):
    return (position - left) % size <= (right - left) % size

def sandwich_violations(cylinder, vertex):
    """Geodesic vertices below `vertex` outside the cyclic arc from its left-most to its right-most geodesic.

    Returns a list of (height, vertex), empty when the sandwich holds.
    """
    leftmost = trace_geodesic(cylinder, vertex, LEFTMOST)
    rightmost = trace_geodesic(cylinder, vertex, RIGHTMOST)

    violations = []

    for (height, level) in sorted(cylinder.reachable([vertex]).items(), reverse=True):
        cycle = cylinder.cycle_at(height)
        position = {u: index for (index, u) in enumerate(cycle)}

        left = position[leftmost.at(height)]
        right = position[rightmost.at(height)]

        for u in sorted(level):
            if not _between(position[u], left, right, len(cycle)):
                violations.append((height, u))

    return violations

def check_chord_free(t):
    """Whether the root vertex has no boundary neighbour besides its two neighbours along the boundary."""
    if t.is_edge_map:
        return True

    hole = t.holes[0]

    allowed = {t.origin(hole), t.target(t.nxt[hole])}

    boundary = {t.origin(dart) for dart in t.boundary()}

    rotation = t.rotation(t.root)

    return all(t.target(dart) not in boundary or t.target(dart) in allowed for dart in rotation)

def fan_triangulation(p):
    """The triangulation of the p-gon without inner vertex whose diagonals all leave the root vertex."""
    if p < 2:
        raise ValueError(f'invalid perimeter: {p}')

    if p == 2:
        return build_polygon([EDGE], 2)

    steps = [split(2), EDGE, *(split(n - 1) for n in range(p - 1, 2, -1)), *[EDGE] * (p - 2)]

    return build_polygon(steps, p)

def needle_triangulation(p, inner=None):
    """A chord-free triangulation of the p-gon with one more vertex than `inner`.

    Two triangles around a new vertex z border the root vertex, its neighbours
    along the boundary and z; the p-gon they leave is filled with `inner`, a
    fan when not given.
    """
    if inner is None:
        inner = fan_triangulation(p)

    if p < 2 or inner.perimeter() != p:
        raise ValueError(f'invalid needle: p = {p}, inner perimeter {inner.perimeter()}')

    builder = MapBuilder()

    hole = builder.hole(p)

    (t0, t1, t2) = builder.face(3)
    (s0, s1, s2) = builder.face(3)

    builder.link(t0, hole[0])
    builder.link(s0, t2)
    builder.link(s2, hole[p - 1])

    builder.fill(inner, [t1, *hole[1:p - 1], s1])

    return builder.build(builder.twin[hole[0]], holes=[hole[0]])

class EventReport(namedtuple('EventReport', ['r', 'c1', 'c2', 'c3', 'boundary'])):
    """Outcome of the coalescence event between heights r and 2r.

    `c1` is (h, slot vertex) or None, `c3` is (v_r, height) or None and
    `boundary` the size of the cycle at height h - 1.
    """

    @property
    def occurred(self):
        return self.c1 is not None and self.c2 and self.c3 is not None

    def to_dict(self):
        return {
            'r': self.r,
            'c1': None if self.c1 is None else {'height': self.c1[0], 'slot': self.c1[1]},
            'c2': self.c2,
            'c3': None if self.c3 is None else {'vertex': self.c3[0], 'height': self.c3[1]},
            'boundary': self.boundary,
            'occurred': self.occurred
        }

def _starts(forest, g):
    """First child position of each vertex of generation g, within generation g + 1."""
    starts = [0]

    for vertex in forest.generation(g):
        starts.append(starts[-1] + forest.child_counts[vertex])

    return starts

def _meeting(forest, g, k, r):
    """Where the right-most geodesic from the left corner and the left-most from the right corner of slot (g, k) meet.

    The geodesics bound the arc of the next generation away from the slot;
    each generation down the arc holds the children of the previous arc and
    the first child of the vertex following it. They meet when the arc is a
    single vertex.
    """
    starts = _starts(forest, g)
    size = starts[-1]

    first = starts[k + 1] % size
    count = min((starts[k] - starts[k + 1]) % size + 1, size)

    for j in range(g + 1, r):
        if count == 1:
            return (forest.generation(j)[first], 2 * r - j)

        generation = forest.generation(j)
        starts = _starts(forest, j)
        size = starts[-1]

        born = sum(forest.child_counts[generation[(first + i) % len(generation)]] for i in range(count))

        (first, count) = (starts[first] % size, min(born + 1, size))

    return None

def detect_event_G(decomp, r, chord_free=None):
    """Check the event forcing geodesic coalescence on a cylinder between heights r and 2r.

    The forest of `decomp` has height r; generation g sits at height 2r - g.
    Heights h with floor(3r/2) <= h <= 2r are searched from the top, slots
    left to right; the first slot satisfying all conditions is reported,
    otherwise the first one satisfying the first condition.

    `chord_free`, when given, decides the second condition from the slot
    perimeter instead of the slot map, for forests sampled without slots.
    """
    if r < 2:
        raise ValueError(f'invalid scale: {r}')

    forest = decomp.forest

    if forest.height != r:
        raise ValueError(f'forest has height {forest.height}, expected {r}')

    first = None

    for h in range(2 * r, (3 * r) // 2 - 1, -1):
        g = 2 * r - h

        if g >= r:
            continue

        boundary = len(forest.generation(g + 1))

        if not 3 * r * r <= boundary <= 4 * r * r:
            continue

        for (k, vertex) in enumerate(forest.generation(g)):
            perimeter = forest.child_counts[vertex] + 2

            if not r * r <= perimeter <= 2 * r * r:
                continue

            c3 = _meeting(forest, g, k, r)

            if chord_free is None:
                c2 = check_chord_free(decomp.slots[vertex])
            else:
                c2 = chord_free(perimeter)

            report = EventReport(r, (h, vertex), c2, c3, boundary)

            if report.occurred:
                if logger.isEnabledFor(logging.DEBUG):
                    logger.debug(f'Coalescence event at scale {r}: slot {vertex} at height {h}, v_r {c3[0]}')

                return report

            if first is None:
                first = report

    return first if first is not None else EventReport(r, None, False, None, None)

def forcing_holds(decomp, report, cylinder):
    """Whether every geodesic from the top cycle to the bottom passes through v_r.

    `cylinder` is the decoded map of `decomp`; forest heights and map
    heights differ by r.
    """
    if not report.occurred:
        return True

    (vertex, height) = report.c3

    g = 2 * report.r - height
    index = decomp.forest.generation(g).index(vertex)

    target = cylinder.cycles[g][index]

    level = cylinder.reachable(cylinder.top)[height - report.r]

    return level == {target}

def is_geodesic(cylinder, path):
    """Consecutive vertices adjacent with heights decreasing by one."""
    return all(cylinder.heights[v] == cylinder.heights[u] - 1 and v in cylinder.down_neighbours(u)
               for (u, v) in pairwise(path.vertices))
