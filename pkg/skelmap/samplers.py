"""
skelmap.samplers
~~~~~~~~~~~~~~~~

Exact samplers at the critical point: Galton-Watson forests with offspring
θ or ν, the skeleton of the infinite triangulation seen from infinity,
Boltzmann triangulations of polygons by peeling, Boltzmann δ-caps, pointed
Boltzmann triangulations and horohulls of the infinite triangulation.
"""

import math
import logging
from collections import namedtuple
from itertools import count
from threading import Lock
import numpy

from .caps import DeltaCapParts, compose_delta_cap
from .forest import PlaneForest
from .gf import SeriesContext, TruncationError
from .peeling import Peel, VERTEX, EDGE, split, peel_into
from .skeleton import SkeletonDecomp, below_root, decode_cylinder, delta_unskeleton
from .triangulation import MapBuilder, MapError, distances, glue

logger = logging.getLogger(__name__)

MAX_CROWN_TERMS = 100_000

# The crown size law is tabulated until its remaining mass is below this.
CROWN_TAIL = 2.0 ** -64

MAX_RESAMPLING = 1_000_000

# Horohull volumes are followed until s1^volume is below this.
VOLUME_TOLERANCE = 2.0 ** -64

class SamplerError(Exception):
    """Transition probabilities failed to normalize."""

SkelSample = namedtuple('SkelSample', ['forest', 'spine'])

SampledHorohull = namedtuple('SampledHorohull', ['map', 'r', 'perimeter', 'volume', 'skel'])

SampledCylinder = namedtuple('SampledCylinder', ['map', 'decomp', 'resampled'])

ImmigrationState = namedtuple('ImmigrationState', ['x', 'y', 'z'])

class HorohullStatistics(namedtuple('HorohullStatistics', ['r', 'perimeter', 'volume', 'skel'])):
    """Perimeter and volume of a horohull; the volume is None past the sampling bound."""

    @property
    def truncated(self):
        return self.volume is None

    def laplace(self, s1, s2):
        """s1^volume s2^perimeter, zero past the bound."""
        if self.truncated:
            return 0.0

        return s1 ** self.volume * s2 ** self.perimeter

def volume_bound(s1, tolerance=VOLUME_TOLERANCE):
    """Smallest volume V with s1^V below `tolerance`, None when s1 = 1."""
    if s1 >= 1:
        return None

    return math.ceil(math.log(tolerance) / math.log(s1))

class Sampler:
    """Samplers sharing the offspring laws and peeling tables of a SeriesContext.

    Every method draws from the RngStream it is given and from nothing else, so
    a (seed, stream_id) pair reproduces its samples exactly.
    """

    def __init__(self, gf=None):
        self.logger = logging.getLogger(__name__)

        self.gf = gf if gf is not None else SeriesContext()

        self.theta = self.gf.theta_law()
        self.nu = self.gf.nu_law()
        self.size_biased_theta = self.gf.size_biased_theta_law()
        self.size_biased_nu = self.gf.size_biased_nu_law()

        self._lock = Lock()
        self._weights = {}
        self._rows = {}
        self._crowns = {}

    def __repr__(self):
        return f'<Sampler gf={self.gf}>'

    # Exact weights

    def weight(self, p):
        """T_p(x_c)."""
        with self._lock:
            if p not in self._weights:
                self._weights[p] = self.gf.boundary_weight(p)

            return self._weights[p]

    def peeling_row(self, p):
        """Cumulative probabilities of the peeling steps on a p-gon.

        Entry 0 is a new inner vertex, entry j in 1..p the split at the j-th
        boundary vertex and entry p + 1 the edge step, possible for p = 2 only.
        """
        with self._lock:
            row = self._rows.get(p)

        if row is not None:
            return row

        gf = self.gf
        ctx = gf.ctx

        total = self.weight(p)

        weights = [gf.x_c * self.weight(p + 1)]
        weights.extend(self.weight(j) * self.weight(p + 1 - j) for j in range(1, p + 1))
        weights.append(ctx.one if p == 2 else ctx.zero)

        probabilities = [weight / total for weight in weights]

        error = abs(ctx.fsum(probabilities) - 1)

        if error > ctx.ldexp(1, 16 - gf.precision_bits):
            raise SamplerError(f'peeling row of the {p}-gon sums to 1 with error {error}')

        if self.logger.isEnabledFor(logging.DEBUG):
            self.logger.debug(f'Peeling row of the {p}-gon: vertex {float(probabilities[0]):.6f}, '
                              f'normalization error {float(error):.3e}')

        row = numpy.cumsum([float(probability) for probability in probabilities])

        with self._lock:
            self._rows[p] = row

        return row

    def crown_law(self, p):
        """Cumulative law of the crown size k of a Boltzmann δ-cap of perimeter p.

        P(k) = T_{p+k+1}(x_c)(x_c T_2(x_c))^k / K_p(x_c), for k >= 1.
        """
        with self._lock:
            row = self._crowns.get(p)

        if row is not None:
            return row

        gf = self.gf
        ctx = gf.ctx

        phi1 = self.theta(0)
        total = gf.cap_gf(p) * gf.x_c / gf.y_c ** (2 - p)

        terms = []
        power = phi1

        for k in range(1, MAX_CROWN_TERMS + 1):
            terms.append(self.theta(p + k - 1) * power / total)

            power *= phi1

            if self.theta.survival(p + k) * power / (1 - phi1) < CROWN_TAIL * total:
                break
        else:
            raise TruncationError(f'crown law of perimeter {p} did not converge')

        error = abs(ctx.fsum(terms) - 1)

        if error > ctx.mpf(CROWN_TAIL) * 4:
            raise TruncationError(f'crown law of perimeter {p} sums to 1 with error {error}')

        row = numpy.cumsum([float(term) for term in terms])

        with self._lock:
            self._crowns[p] = row

        return row

    def boltzmann_probability(self, t):
        """x_c^n / T_p(x_c) for a triangulation of the p-gon with n inner vertices."""
        p = t.perimeter()

        return self.gf.x_c ** t.inner_vertex_count() / self.weight(p)

    def delta_cap_probability(self, cap):
        """x_c^n / K_p(x_c) for a δ-cap with n vertices off its hole."""
        p = cap.perimeter(1) if len(cap.holes) == 2 else 0

        off_hole = cap.vertex_count - p - (1 if p == 0 else 0)

        return self.gf.x_c ** off_hole / self.gf.cap_gf(p)

    def conditioned_skel_probability(self, forest):
        """Probability that the skeleton seen from infinity truncated at its height is `forest`.

        p ν(c(ρ))/2 Π θ(c(v)) over the generations strictly between the root and
        the last one, p being the size of the last generation.
        """
        r = forest.height

        if r < 1 or len(forest.trees) != 1:
            return self.gf.ctx.zero

        value = len(forest.generation(r)) * self.nu(forest.child_counts[0]) / 2

        for g in range(1, r):
            for vertex in forest.generation(g):
                value *= self.theta(forest.child_counts[vertex])

        return value

    # Peeling

    def _step(self, p, rng):
        row = self.peeling_row(p)

        index = int(numpy.searchsorted(row, rng.random() * row[-1], side='right'))

        if index == 0:
            return VERTEX

        if index <= p:
            return split(index)

        return EDGE

    def sample_boltzmann_polygon(self, p, rng):
        """Critical Boltzmann triangulation of the p-gon, by peeling."""
        if p < 1:
            raise ValueError(f'invalid perimeter: {p}')

        builder = MapBuilder()

        hole = builder.hole(p)

        try:
            peel_into(builder, hole, lambda perimeter: self._step(perimeter, rng))
        except MapError as error:
            raise SamplerError(f'peeling failed: {error}') from error

        return builder.build(builder.twin[hole[0]], holes=[hole[0]])

    def sample_boltzmann_word(self, p, rng, max_inner=None):
        """Peeling steps of a Boltzmann triangulation of the p-gon, in build_polygon order.

        Returns None as soon as more than `max_inner` inner vertices appear.
        """
        if p < 1:
            raise ValueError(f'invalid perimeter: {p}')

        stack = [p]
        steps = []
        inner = 0

        while stack:
            perimeter = stack.pop()

            step = self._step(perimeter, rng)
            steps.append(step)

            (kind, j) = step

            if kind == Peel.VERTEX:
                inner += 1

                if max_inner is not None and inner > max_inner:
                    return None

                stack.append(perimeter + 1)
            elif kind == Peel.SPLIT:
                stack.append(perimeter + 1 - j)
                stack.append(j)

        return tuple(steps)

    def boltzmann_polygon_size(self, p, rng):
        """Inner vertex count of a Boltzmann triangulation of the p-gon.

        Draws the same steps as sample_boltzmann_polygon without building it.
        """
        stack = [p]
        inner = 0

        while stack:
            perimeter = stack.pop()

            (kind, j) = self._step(perimeter, rng)

            if kind == Peel.VERTEX:
                stack.append(perimeter + 1)

                inner += 1
            elif kind == Peel.SPLIT:
                stack.append(perimeter + 1 - j)
                stack.append(j)

        return inner

    # δ-caps

    def _crown_size(self, p, rng):
        row = self.crown_law(p)

        return int(numpy.searchsorted(row, rng.random() * row[-1], side='right')) + 1

    def sample_boltzmann_delta_cap(self, p, rng):
        """Critical Boltzmann δ-cap of perimeter p >= 0."""
        if p < 0:
            raise ValueError(f'invalid perimeter: {p}')

        k = self._crown_size(p, rng)

        two_gons = [self.sample_boltzmann_polygon(2, rng) for _ in range(k)]
        polygon = self.sample_boltzmann_polygon(p + k + 1, rng)

        return compose_delta_cap(DeltaCapParts(two_gons, polygon))

    def delta_cap_size(self, p, rng):
        """Vertices off the hole of a Boltzmann δ-cap, drawn like sample_boltzmann_delta_cap."""
        k = self._crown_size(p, rng)

        inner = sum(self.boltzmann_polygon_size(2, rng) for _ in range(k))
        inner += self.boltzmann_polygon_size(p + k + 1, rng)

        return k + inner

    # Trees

    def _offspring(self, law, size, rng):
        if size == 0:
            return []

        return [int(c) for c in law.sample(rng, size)]

    def _generation_size(self, size, rng):
        """Total θ offspring of `size` individuals."""
        if size == 0:
            return 0

        return int(self.theta.sample(rng, size).sum())

    def extinction_generation(self, size, max_generation, rng):
        """First generation of a θ Galton-Watson process from `size` individuals with no one left.

        Returns max_generation when the process is still alive there.
        """
        for g in range(max_generation):
            if size == 0:
                return g

            size = self._generation_size(size, rng)

        return max_generation

    def sample_pointed_height(self, rng):
        """d(ρ, δ) in the pointed Boltzmann triangulation: one more than its skeleton height.

        Follows generation sizes only.
        """
        size = int(self.nu.sample(rng))
        height = 1

        while size:
            size = self._generation_size(size, rng)
            height += 1

        return height

    def sample_gw_tree(self, max_height, rng, root_law='theta'):
        """Galton-Watson tree with offspring θ, the root using θ or ν, cut at max_height."""
        if max_height < 0:
            raise ValueError(f'invalid height: {max_height}')

        laws = {'theta': self.theta, 'nu': self.nu}

        if root_law not in laws:
            raise ValueError(f'invalid root law: {root_law}')

        if max_height == 0:
            return PlaneForest([[0]])

        levels = [[laws[root_law].sample(rng)]]

        return PlaneForest.from_levels(self._grow(levels, max_height, rng))

    def _grow(self, levels, max_height, rng):
        """Extend generations with θ offspring up to generation max_height, whose vertices are leaves."""
        while sum(levels[-1]) and len(levels) < max_height:
            levels.append(self._offspring(self.theta, sum(levels[-1]), rng))

        if sum(levels[-1]):
            levels.append([0] * sum(levels[-1]))

        return levels

    def sample_skel_conditioned(self, r, rng, max_width=None):
        """The skeleton seen from infinity, truncated at generation r.

        Root offspring from the size-biased ν, spine offspring from the
        size-biased θ, a uniform child continuing the spine, all other
        vertices θ. `spine` gives the position of the spine vertex in each
        generation. Returns None as soon as a generation has more than
        `max_width` vertices.
        """
        if r < 1:
            raise ValueError(f'invalid radius: {r}')

        root = int(self.size_biased_nu.sample(rng))

        if root == 0:
            raise SamplerError('size-biased root law produced no children')

        levels = [[root]]
        spine = [0]

        for g in range(1, r + 1):
            above = levels[-1]

            width = sum(above)

            if max_width is not None and width > max_width:
                self.logger.debug(f'Generation {g} has {width} vertices, more than {max_width}')

                return None

            position = sum(above[:spine[-1]]) + rng.uniform_index(above[spine[-1]])

            if g == r:
                counts = [0] * width
            else:
                counts = self._offspring(self.theta, width, rng)
                counts[position] = int(self.size_biased_theta.sample(rng))

            levels.append(counts)
            spine.append(position)

        return SkelSample(PlaneForest.from_levels(levels), spine)

    def sample_pointed_skel(self, rng):
        """Skeleton of the pointed Boltzmann triangulation: root ν, all others θ."""
        levels = [[int(self.nu.sample(rng))]]

        while sum(levels[-1]):
            levels.append(self._offspring(self.theta, sum(levels[-1]), rng))

        return PlaneForest.from_levels(levels)

    def _slots(self, forest, vertices, rng):
        return {vertex: self.sample_boltzmann_polygon(forest.child_counts[vertex] + 2, rng)
                for vertex in vertices}

    def sample_pointed_boltzmann(self, rng):
        """Critical pointed Boltzmann triangulation of the 1-gon, marked at δ."""
        forest = self.sample_pointed_skel(rng)

        slots = self._slots(forest, range(1, len(forest)), rng)

        cap = self.sample_boltzmann_delta_cap(forest.child_counts[0], rng)

        return delta_unskeleton(SkeletonDecomp('delta', forest, slots, cap=cap))

    # Horohulls of the infinite triangulation

    def sample_uipt_horohull(self, r, rng):
        """H̄_r of the infinite triangulation, labelled by the horofunction.

        The bottom hole is represented by the dart ending at the spine vertex of
        generation r.
        """
        skel = self.sample_skel_conditioned(r, rng)
        forest = skel.forest

        inner = [vertex for vertex in range(1, len(forest)) if forest.depth(vertex) < r]

        slots = self._slots(forest, inner, rng)

        cap = self.sample_boltzmann_delta_cap(forest.child_counts[0], rng)

        bottom = forest.generation(r)[skel.spine[r]]

        cylinder = decode_cylinder(SkeletonDecomp('cylinder', below_root(forest),
                                                  {vertex - 1: slot for (vertex, slot) in slots.items()},
                                                  marked=bottom - 1))

        (builder, a_mapping, b_mapping) = glue(cylinder, cylinder.holes[1], cap, cap.nxt[cap.holes[1]])

        t = builder.build(b_mapping[cap.root], holes=[b_mapping[cap.holes[0]], a_mapping[cylinder.holes[0]]])

        boundary = [t.origin(dart) for dart in t.boundary(1)]
        distance = distances(t, boundary)

        t = t.with_labels([distance[t.origin(dart)] - r for dart in range(len(t))])

        return SampledHorohull(t, r, len(boundary), t.vertex_count, skel)

    def horohull_statistics(self, r, rng, max_volume=None):
        """Volume and perimeter of H̄_r, drawn like sample_uipt_horohull.

        Sampling stops once the volume exceeds `max_volume`: the volume is
        then None, and so is the skeleton when one of its generations alone
        is wider.
        """
        skel = self.sample_skel_conditioned(r, rng, max_width=max_volume)

        if skel is None:
            return HorohullStatistics(r, None, None, None)

        forest = skel.forest

        perimeter = len(forest.generation(r))

        volume = len(forest) - 1

        for vertex in range(1, len(forest)):
            if max_volume is not None and volume > max_volume:
                return HorohullStatistics(r, perimeter, None, skel)

            if forest.depth(vertex) < r:
                volume += self.boltzmann_polygon_size(forest.child_counts[vertex] + 2, rng)

        if max_volume is not None and volume > max_volume:
            return HorohullStatistics(r, perimeter, None, skel)

        volume += self.delta_cap_size(forest.child_counts[0], rng)

        return HorohullStatistics(r, perimeter, volume, skel)

    # Surrogate layers

    def sample_chord_free(self, p, rng):
        """Whether a Boltzmann triangulation of the p-gon has no chord at its root vertex.

        Peels like sample_boltzmann_polygon but follows vertex labels only,
        and only through the polygons holding the root vertex; the others
        add no edge at it.
        """
        if p < 1:
            raise ValueError(f'invalid perimeter: {p}')

        # boundary vertices are 0..p-1 with 0 the root vertex and 1 its right neighbour
        allowed = {1 % p, p - 1}

        def chord(u, v):
            return u == 0 and v < p and v not in allowed

        fresh = count(p)
        stack = [list(range(p))]

        while stack:
            polygon = stack.pop()
            n = len(polygon)

            (kind, j) = self._step(n, rng)

            if kind == Peel.EDGE:
                continue

            (u, w) = (polygon[0], polygon[1 % n])

            apex = next(fresh) if kind == Peel.VERTEX else polygon[j % n]

            if chord(u, apex) or chord(apex, u) or chord(w, apex) or chord(apex, w):
                return False

            if kind == Peel.VERTEX:
                parts = [[u, apex, *polygon[1:]]]
            else:
                parts = [[*polygon[j:], u], [*polygon[1:j], apex]]

            stack.extend(part for part in parts if 0 in part)

        return True

    def sample_cylinder_forest(self, q, r, rng):
        """Skeleton forest of q iid θ trees reaching height r, with the number of forests redrawn."""
        if q < 1 or r < 1:
            raise ValueError(f'invalid cylinder: q = {q}, r = {r}')

        for resampled in range(MAX_RESAMPLING):
            levels = self._grow([self._offspring(self.theta, q, rng)], r, rng)

            if len(levels) == r + 1:
                break
        else:
            raise SamplerError(f'no forest of {q} trees reached height {r}')

        if resampled:
            self.logger.debug(f'Redrew {resampled} forests of {q} trees to reach height {r}')

        return (PlaneForest.from_levels(levels), resampled)

    def sample_cylinder_from_gw(self, q, r, rng):
        """Cylinder of height r whose skeleton is q iid θ trees cut at height r.

        Forests dying out before generation r are redrawn; the number of
        redraws is returned with the sample.
        """
        (forest, resampled) = self.sample_cylinder_forest(q, r, rng)

        slots = self._slots(forest, [v for v in range(len(forest)) if forest.depth(v) < r], rng)

        bottom = forest.generation(r)

        marked = bottom[rng.uniform_index(len(bottom))]

        decomp = SkeletonDecomp('cylinder', forest, slots, marked=marked)

        return SampledCylinder(decode_cylinder(decomp), decomp, resampled)

    def sample_immigration(self, y0, z0, n0, rng):
        """Trajectory of (X, Y, Z): Y loses one individual per step, Z gains one.

        Stops after n0 steps or once Y reaches 0.
        """
        if y0 < 1 or z0 < 0 or n0 < 1:
            raise ValueError(f'invalid start: y0 = {y0}, z0 = {z0}, n0 = {n0}')

        (y, z) = (y0, z0)

        trajectory = [ImmigrationState(y + z, y, z)]

        while len(trajectory) <= n0 and y > 0:
            y = self._generation_size(y - 1, rng)
            z = self._generation_size(z + 1, rng)

            trajectory.append(ImmigrationState(y + z, y, z))

        return trajectory

    def sample_emigrant_descendants(self, n0, rng):
        """E_0 = 0 and E_{n+1} = Σ_{i=1}^{E_n+1} ξ_i, for n < n0."""
        trajectory = [0]

        for _ in range(n0):
            trajectory.append(self._generation_size(trajectory[-1] + 1, rng))

        return trajectory

def emigrant_extinction_probability(n0):
    """P(E_{n0} = 0) = Π_{r=1}^{n0} (1 − (r+1)^{−2}) = (n0 + 2)/(2(n0 + 1))."""
    return (n0 + 2) / (2 * (n0 + 1))
