"""
skelmap.hull
~~~~~~~~~~~~

Hulls seen from the root and from the marked vertex of a pointed
triangulation of the 1-gon.
"""

import logging

from .triangulation import Triangulation, MapError, extract, flood_faces, distances, anchor_dart

logger = logging.getLogger(__name__)

class RadiusError(ValueError):
    """Radius outside the range allowed by d(ρ, δ)."""

def height(t):
    """d(ρ, δ)."""
    if t.marked is None:
        raise MapError('map is not pointed')

    return distances(t, [t.root_vertex])[t.marked_vertex]

def horofunction(t):
    """ℓ(u) = d(u, δ) − d(ρ, δ) per vertex."""
    from_delta = distances(t, [t.marked_vertex])

    h = from_delta[t.root_vertex]

    return [distance - h for distance in from_delta]

def _far_faces(t, distance, bound, include_holes=False):
    """Faces all of whose vertices are at distance >= bound."""
    nearest = {}

    for dart in range(len(t)):
        face = t.face_of[dart]

        nearest[face] = min(nearest.get(face, bound), distance[t.origin(dart)])

    return {face for (face, value) in nearest.items()
            if value >= bound and (include_holes or face not in t.hole_faces)}

def cap_faces(t, r):
    """Inner faces of the component of t \\ B_r(t) containing δ."""
    h = height(t)

    if not 0 <= r < h:
        raise RadiusError(f'invalid radius {r} for d(ρ, δ) = {h}')

    far = _far_faces(t, distances(t, [t.root_vertex]), r)

    start = next(dart for dart in t.rotation(t.marked) if t.face_of[dart] in far)

    return flood_faces(t, start, far)

def hull_faces(t, r):
    """Faces of B̄_r(t, δ), the outside face included."""
    cap = cap_faces(t, r)

    return {face for face in range(t.face_count) if face not in cap}

def split_hull(t, r):
    """Cut t along ∂B̄_r into the hull and the cap containing δ.

    The hull is an (r, 1, q)-cylinder with holes [outside, top] and the cap a
    triangulation of the q-gon marked at δ. Gluing `hull.holes[1]` to
    `cap.holes[0]` gives back t. Returns (hull, cap, hull_mapping,
    cap_mapping, hull_outer, cap_outer).

    For r = 0 the hull is the root loop, a cylinder of height 0, and the cap
    is t itself.
    """
    cap = cap_faces(t, r)
    hull_set = {face for face in range(t.face_count) if face not in cap}

    (hull_builder, hull_mapping, hull_outer) = extract(t, hull_set)
    (cap_builder, cap_mapping, cap_outer) = extract(t, cap)

    # Pair the two holes along one edge of the cut.
    (d, new) = min(hull_outer.items())

    if r == 0:
        root = hull_outer[t.twin[t.root]]
    else:
        root = hull_mapping[t.root]

    hull_map = hull_builder.build(root, holes=[hull_mapping[t.holes[0]], new])

    cap_map = cap_builder.build(cap_mapping[t.twin[d]], holes=[cap_outer[t.twin[d]]],
                                marked=cap_mapping[t.marked])

    return (hull_map, cap_map, hull_mapping, cap_mapping, hull_outer, cap_outer)

def hull(t, r):
    """B̄_r(t, δ) as an (r, 1, q)-cylinder, its top rooted at the anchor."""
    (hull_map, *_) = split_hull(t, r)

    holes = [hull_map.holes[0], anchor_dart(hull_map, 1)]

    return hull_map.with_holes(holes)

def rho_cap(t, r=None):
    """The component of t \\ B_r(t) containing δ, r = d(ρ, δ) − 1 by default."""
    if r is None:
        r = height(t) - 1

    (_, cap_map, *_) = split_hull(t, r)

    dart = anchor_dart(cap_map, 0)

    return cap_map.with_holes([dart], root=cap_map.twin[dart])

def horohull_faces(t, r):
    """Faces of H̄_r(t, δ), the outside face included."""
    h = height(t)

    if not 1 <= r <= h:
        raise RadiusError(f'invalid radius {r} for d(ρ, δ) = {h}')

    far = _far_faces(t, distances(t, [t.marked_vertex]), h - r, include_holes=True)

    return flood_faces(t, t.holes[0], far)

def split_horohull(t, r):
    """Cut t along ∂H̄_r into the co-horohull cone and the horohull.

    Both holes are represented by the dart ending at v1, the boundary vertex
    reached by the right-most geodesic from ρ. Gluing `cone.holes[0]` to
    `horohull.nxt[horohull.holes[1]]` gives back t. For r = d(ρ, δ) the cone is
    the vertex map and the horohull is t itself.
    """
    h = height(t)

    labels = horofunction(t)

    if r == h:
        labelled = t.with_labels([labels[t.origin(dart)] for dart in range(len(t))])

        return (Triangulation.vertex_map(), labelled)

    horo = horohull_faces(t, r)
    cone = {face for face in range(t.face_count) if face not in horo}

    (horo_builder, horo_mapping, horo_outer) = extract(t, horo)
    (cone_builder, cone_mapping, cone_outer) = extract(t, cone)

    v1 = rightmost_boundary_vertex(t, {t.origin(dart) for dart in horo_outer})

    horo_dart = next(new for (dart, new) in horo_outer.items() if t.origin(dart) == v1)
    cone_dart = next(new for (dart, new) in cone_outer.items() if t.origin(dart) == v1)

    horo_labels = [None] * len(horo_builder)

    for (dart, new) in horo_mapping.items():
        horo_labels[new] = labels[t.origin(dart)]

    for (dart, new) in horo_outer.items():
        horo_labels[new] = labels[t.target(dart)]

    horohull_map = horo_builder.build(horo_mapping[t.root],
                                      holes=[horo_mapping[t.holes[0]], horo_dart],
                                      labels=horo_labels)

    cone_map = cone_builder.build(cone_builder.twin[cone_dart], holes=[cone_dart],
                                  marked=cone_mapping[t.marked])

    return (cone_map, horohull_map)

def co_horohull(t, r):
    """C̄_r(t, δ), a triangulation of the cone of height d(ρ, δ) − r."""
    return split_horohull(t, r)[0]

def horohull(t, r):
    """H̄_r(t, δ) = t \\ C̄_r(t, δ), carrying the horofunction as labels."""
    return split_horohull(t, r)[1]

def rightmost_boundary_vertex(t, boundary):
    """End of the right-most geodesic from ρ to a set of vertices.

    Starting from the root loop, each step takes the first dart clockwise
    from the arrival edge that gets one step closer to the set.
    """
    distance = distances(t, boundary)

    current = t.root

    while distance[t.origin(current)] > 0:
        candidate = t.sigma_inverse(current)

        while distance[t.target(candidate)] != distance[t.origin(current)] - 1:
            candidate = t.sigma_inverse(candidate)

        current = t.twin[candidate]

    return t.origin(current)
