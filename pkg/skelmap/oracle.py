"""
skelmap.oracle
~~~~~~~~~~~~~~

Exhaustive enumeration of small triangulations of the p-gon.
"""

import logging
from functools import lru_cache
from sortedcontainers import SortedDict

from .caps import DeltaCapParts, RhoCapParts
from .forest import PlaneForest
from .peeling import VERTEX, EDGE, split, build_polygon
from .skeleton import SkeletonDecomp
from .triangulation import canonical_code, inverse_root_transform, distances, vertex_darts

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 2_000_000

class BudgetExceededError(Exception):
    """Enumeration exceeded its node budget."""

class Enumerator:
    """Enumerates peeling step sequences of triangulations of the p-gon."""

    def __init__(self, budget=DEFAULT_BUDGET):
        self.logger = logging.getLogger(__name__)

        self.budget = budget
        self.expanded = 0

        self._fill = lru_cache(maxsize=None)(self._fill_uncached)

    def words(self, perimeter, inner):
        """All step sequences with exactly `inner` inner vertices."""
        return self._fill(perimeter, inner)

    def _fill_uncached(self, perimeter, inner):
        words = []

        if perimeter == 2 and inner == 0:
            words.append((EDGE,))

        if inner >= 1:
            for word in self._fill(perimeter + 1, inner - 1):
                words.append((VERTEX, *word))

        for j in range(1, perimeter + 1):
            (left, right) = (j, perimeter + 1 - j)

            for left_inner in range(inner + 1):
                right_inner = inner - left_inner

                if (left == 1 and left_inner == 0) or (right == 1 and right_inner == 0):
                    continue

                left_words = self._fill(left, left_inner)

                if not left_words:
                    continue

                for right_word in self._fill(right, right_inner):
                    for left_word in left_words:
                        words.append((split(j), *left_word, *right_word))

        self.expanded += len(words)

        if self.expanded > self.budget:
            raise BudgetExceededError(f'enumeration budget of {self.budget} nodes exceeded')

        return tuple(words)

def enumerate_polygons(perimeter, max_inner, budget=DEFAULT_BUDGET):
    """All triangulations of the p-gon with at most `max_inner` inner vertices.

    Maps are deduplicated by canonical code and returned grouped by size, as a
    dict inner vertex count -> list of maps.
    """
    enumerator = Enumerator(budget)

    corpus = SortedDict()

    for inner in range(max_inner + 1):
        seen = set()
        maps = []

        for word in enumerator.words(perimeter, inner):
            t = build_polygon(word, perimeter)
            code = canonical_code(t)

            if code in seen:
                logger.warning(f'Duplicate {perimeter}-gon map with {inner} inner vertices')
                continue

            seen.add(code)
            maps.append(t)

        corpus[inner] = maps

    logger.debug(f'Enumerated {perimeter}-gon maps up to {max_inner} inner vertices, '
                 f'{enumerator.expanded} nodes expanded')

    return corpus

def polygon_counts(perimeter, max_inner, budget=DEFAULT_BUDGET):
    """|T_{n,p}| for n = 0..max_inner, counted from step sequences."""
    enumerator = Enumerator(budget)

    return [len(enumerator.words(perimeter, inner)) for inner in range(max_inner + 1)]

def enumerate_spheres(max_vertices, budget=DEFAULT_BUDGET):
    """Rooted sphere triangulations with at most `max_vertices` vertices.

    The single edge sphere is included as the two-vertex degenerate case.
    """
    corpus = enumerate_polygons(1, max_vertices - 1, budget)

    return [inverse_root_transform(t) for maps in corpus.values() for t in maps]

def enumerate_pointed(max_vertices, budget=DEFAULT_BUDGET):
    """Triangulations of the 1-gon marked at a vertex other than the root vertex.

    These are the root transforms of pointed spheres with d(ρ, δ) >= 1.
    """
    corpus = enumerate_polygons(1, max_vertices - 1, budget)

    pointed = []

    for maps in corpus.values():
        for t in maps:
            for vertex in range(t.vertex_count):
                if vertex == t.root_vertex:
                    continue

                pointed.append(t.with_marked(vertex_darts(t, vertex)[0]))

    return pointed

def pointed_height(t):
    """d(ρ, δ) in a pointed map."""
    return distances(t, [t.root_vertex])[t.marked_vertex]

def _weak_compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()

        return

    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first, *rest)

def enumerate_forests(trees, height, leaves, max_vertices):
    """Plane forests of `trees` trees cut at `height` with `leaves` vertices there.

    Every generation up to `height` is nonempty and the forest has at most
    `max_vertices` vertices.
    """
    def grow(levels, size, used):
        g = len(levels)

        if g == height:
            if size == leaves:
                yield PlaneForest.from_levels([*levels, [0] * size])

            return

        budget = max_vertices - used

        totals = range(1, budget + 1) if g + 1 < height else [leaves] if leaves <= budget else []

        for total in totals:
            for counts in _weak_compositions(total, size):
                yield from grow([*levels, list(counts)], total, used + total)

    if trees > max_vertices:
        return

    yield from grow([], trees, trees)

def _polygon_corpora(budget):
    corpora = {}

    def corpus(perimeter, max_inner):
        if corpora.get(perimeter, (None, -1))[1] < max_inner:
            corpora[perimeter] = (enumerate_polygons(perimeter, max_inner, budget), max_inner)

        return corpora[perimeter][0]

    return corpus

def _polygon_choices(perimeters, corpus, remaining):
    """Tuples of triangulations of the given perimeters with at most `remaining` inner vertices in all."""
    if not perimeters:
        yield ()

        return

    (perimeter, *rest) = perimeters

    for (inner, maps) in corpus(perimeter, remaining).items():
        if inner > remaining:
            break

        for tail in _polygon_choices(rest, corpus, remaining - inner):
            for t in maps:
                yield (t, *tail)

def enumerate_cylinders(r, p, q, max_vertices, budget=DEFAULT_BUDGET):
    """Skeleton decompositions of all (r, p, q)-cylinders with at most `max_vertices` vertices.

    One decomposition per forest, marked leaf and choice of slots; there are
    p of them per cylinder with an unmarked bottom.
    """
    corpus = _polygon_corpora(budget)

    decomps = []

    for forest in enumerate_forests(q, r, p, max_vertices):
        vertices = [vertex for vertex in range(len(forest)) if forest.depth(vertex) < r]
        perimeters = [forest.child_counts[vertex] + 2 for vertex in vertices]

        for choice in _polygon_choices(perimeters, corpus, max_vertices - len(forest)):
            slots = dict(zip(vertices, choice))

            for marked in forest.generation(r):
                decomps.append(SkeletonDecomp('cylinder', forest, slots, marked=marked))

    logger.debug(f'Enumerated {len(decomps)} ({r}, {p}, {q})-cylinder decompositions '
                 f'up to {max_vertices} vertices')

    return decomps

def enumerate_cones(r, q, max_vertices, budget=DEFAULT_BUDGET):
    """Skeleton decompositions of all cones of height r >= 1 and perimeter q.

    The cones have at most `max_vertices` vertices, the apex included.
    """
    if r < 1:
        raise ValueError(f'invalid height: {r}')

    corpus = _polygon_corpora(budget)

    decomps = []

    for leaves in range(1, max_vertices):
        for forest in enumerate_forests(q, r - 1, leaves, max_vertices - 1):
            perimeters = [count + 2 for count in forest.child_counts]

            for choice in _polygon_choices(perimeters, corpus, max_vertices - 1 - len(forest)):
                decomps.append(SkeletonDecomp('cone', forest, dict(enumerate(choice))))

    logger.debug(f'Enumerated {len(decomps)} cones of height {r} and perimeter {q} '
                 f'up to {max_vertices} vertices')

    return decomps

def enumerate_delta_caps(p, max_vertices, budget=DEFAULT_BUDGET):
    """Parts of all δ-caps of perimeter p with at most `max_vertices` vertices.

    A δ-cap with k crown triangles has max(p, 1) + k vertices plus the inner
    vertices of its parts.
    """
    corpus = _polygon_corpora(budget)

    n_max = max_vertices - max(p, 1)

    caps = []

    for k in range(1, n_max + 1):
        for choice in _polygon_choices([2] * k + [p + k + 1], corpus, n_max - k):
            caps.append(DeltaCapParts(list(choice[:k]), choice[k]))

    return caps

def enumerate_rho_caps(p, max_vertices, budget=DEFAULT_BUDGET):
    """Parts of all ρ-caps of perimeter p >= 1 with at most `max_vertices` vertices.

    A ρ-cap with a crown of i triangles has p + i vertices plus the inner
    vertices of its parts.
    """
    if p < 1:
        raise ValueError(f'invalid perimeter: {p}')

    corpus = _polygon_corpora(budget)

    caps = []

    for i in range(1, max_vertices - p + 1):
        for k in range(1, p + 1):
            perimeters = [2] * (i - 1) + [k + i, p - k + 2]

            for choice in _polygon_choices(perimeters, corpus, max_vertices - p - i):
                (*two_gons, left, right) = choice

                for j in range(1, k + 1):
                    caps.append(RhoCapParts(k, j, two_gons, left, right))

    return caps
