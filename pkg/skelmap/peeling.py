"""
skelmap.peeling
~~~~~~~~~~~~~~~
"""

from enum import Enum

from .triangulation import MapBuilder, MapError

class Peel(Enum):
    """Outcome of revealing the triangle on a peel edge."""

    VERTEX = 1
    SPLIT = 2
    EDGE = 3

VERTEX = (Peel.VERTEX, None)
EDGE = (Peel.EDGE, None)

def split(j):
    return (Peel.SPLIT, j)

def peel_into(builder, open_darts, next_step):
    """Fill the hole bounded by `open_darts` one triangle at a time.

    `next_step(perimeter)` returns the step to apply to the current polygon;
    polygons are processed depth first, the part left of a split before the
    part right of it. Returns the number of inner vertices created.
    """
    stack = [list(open_darts)]
    inner_vertices = 0

    while stack:
        polygon = stack.pop()
        perimeter = len(polygon)

        (kind, j) = next_step(perimeter)

        if kind == Peel.EDGE:
            if perimeter != 2:
                raise MapError(f'edge step on a {perimeter}-gon')

            builder.link(polygon[0], polygon[1])

            continue

        (t0, t1, t2) = builder.face(3)

        builder.link(t0, polygon[0])

        if kind == Peel.VERTEX:
            stack.append([t2, t1, *polygon[1:]])

            inner_vertices += 1
        elif 1 <= j <= perimeter:
            stack.append([*polygon[j:], t2])
            stack.append([*polygon[1:j], t1])
        else:
            raise MapError(f'split {j} on a {perimeter}-gon')

    return inner_vertices

def build_polygon(steps, perimeter):
    """Build the triangulation of the p-gon described by a step sequence."""
    builder = MapBuilder()

    hole = builder.hole(perimeter)

    iterator = iter(steps)

    peel_into(builder, hole, lambda _: next(iterator))

    if next(iterator, None) is not None:
        raise MapError('unused peeling steps')

    return builder.build(builder.twin[hole[0]], holes=[hole[0]])

def inner_vertices(steps):
    return sum(1 for (kind, _) in steps if kind == Peel.VERTEX)
