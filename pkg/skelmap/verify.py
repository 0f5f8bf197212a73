"""
skelmap.verify
~~~~~~~~~~~~~~

Acceptance checks: exact series identities, codec bijectivity on exhaustive
corpora, sampler laws and the geodesic forcing property.
"""

import time
import math
import logging
from collections import Counter, defaultdict, namedtuple
from itertools import product
from more_itertools import pairwise

from . import pmap
from .caps import anchor_delta_cap, compose_delta_cap, compose_rho_cap, decompose_delta_cap, decompose_rho_cap
from .geodesics import Cylinder, detect_event_G, forcing_holds, fan_triangulation, needle_triangulation
from .gf import SeriesContext
from .hull import co_horohull, horohull, hull, rho_cap
from .oracle import (Enumerator, enumerate_cones, enumerate_cylinders, enumerate_delta_caps, enumerate_pointed,
                     enumerate_polygons, enumerate_rho_caps, pointed_height, polygon_counts)
from .forest import PlaneForest
from .rng import replicate
from .samplers import Sampler, emigrant_extinction_probability, volume_bound
from .skeleton import (CodecError, SkeletonDecomp, decode_cone, decode_cylinder, delta_skeleton, delta_unskeleton,
                       encode_cone, encode_cylinder, rho_skeleton, rho_unskeleton, skeleton_size)
from .stats import binomial_band, mean_band, total_variation, wilson_interval
from .triangulation import MapError, canonical_code, vertex_darts
from . import series

logger = logging.getLogger(__name__)

SUITE_NAMES = ('series', 'codec', 'samplers', 'geodesics')

CheckResult = namedtuple('CheckResult', ['suite', 'name', 'passed', 'detail', 'elapsed'])

# Sample counts of the full runs, and of --quick runs.
FULL_SAMPLES = {
    'sphere_height': 1_000_000,
    'skeleton_law': 1_000_000,
    'horohull': 1_000_000,
    'extinction': 1_000_000,
    'emigrants': 100_000,
    'boltzmann': 1_000_000,
    'chord_free': 100_000,
    'forcing': 200,
    'coalescence': 1_000
}

QUICK_SAMPLES = {
    'sphere_height': 20_000,
    'skeleton_law': 20_000,
    'horohull': 20_000,
    'extinction': 20_000,
    'emigrants': 5_000,
    'boltzmann': 20_000,
    'chord_free': 5_000,
    'forcing': 20,
    'coalescence': 400
}

SIGMAS = 4

TWO_POINT_LAMBDAS = (0.25, 1.0, 4.0)
TWO_POINT_HEIGHTS = (125, 250, 500, 1000, 2000)

HOROHULL_RADII = (10 ** 2, 10 ** 3, 10 ** 4)
HOROHULL_LAMBDAS = (0.5, 1.0, 2.0)

COALESCENCE_SCALES = (8, 16, 32)
COALESCENCE_Q_RULE = 3.5

class Verifier:
    """Runs the acceptance suites for one ExperimentConfig."""

    def __init__(self, config, quick=False):
        self.logger = logging.getLogger(__name__)

        self.config = config
        self.quick = quick

        self.gf = SeriesContext(config.precision_bits, config.max_order)

        self._sampler = None
        self._pointed = None
        self._pieces = None

        self.pointed_vertices = 6 if quick else 8

        self.checks = {
            'series': [
                ('exact_table', self.check_exact_table),
                ('offspring_means', self.check_offspring_means),
                ('two_point_trend', self.check_two_point_trend),
                ('singular_coefficients', self.check_singular_coefficients),
                ('horohull_limit', self.check_horohull_limit),
                ('one_gon_asymptotic', self.check_one_gon_asymptotic)
            ],
            'codec': [
                ('pointed_corpus', self.check_pointed_corpus),
                ('cylinder_corpus', self.check_cylinder_corpus),
                ('cone_corpus', self.check_cone_corpus),
                ('delta_cap_corpus', self.check_delta_cap_corpus),
                ('rho_cap_corpus', self.check_rho_cap_corpus),
                ('polygon_counts', self.check_polygon_counts),
                ('two_point_counts', self.check_two_point_counts)
            ],
            'samplers': [
                ('sphere_height', self.check_sphere_height),
                ('skeleton_law', self.check_skeleton_law),
                ('horohull', self.check_horohull),
                ('extinction', self.check_extinction),
                ('emigrants', self.check_emigrants),
                ('boltzmann', self.check_boltzmann),
                ('chord_free', self.check_chord_free)
            ],
            'geodesics': [
                ('event_fixture', self.check_event_fixture),
                ('forcing', self.check_forcing),
                ('coalescence', self.check_coalescence)
            ]
        }

    @property
    def sampler(self):
        if self._sampler is None:
            self._sampler = Sampler(self.gf)

        return self._sampler

    def samples(self, name):
        defaults = QUICK_SAMPLES if self.quick else FULL_SAMPLES

        return self.config.samples(name, defaults[name])

    def replicate(self, task, total):
        return replicate(task, total, self.config.seed, self.config.stream_count, self.config.workers)

    def run(self, suite='all'):
        """Run a suite, or all of them, and return the CheckResult list."""
        suites = SUITE_NAMES if suite == 'all' else (suite,)

        results = []

        for name in suites:
            if name not in self.checks:
                raise ValueError(f'unknown suite: {name}')

            self.logger.info(f'Running suite {name}')

            for (check_name, check) in self.checks[name]:
                results.append(self.run_check(name, check_name, check))

        failed = sum(1 for result in results if not result.passed)

        self.logger.info(f'{len(results) - failed} of {len(results)} checks passed')

        return results

    def run_check(self, suite, name, check):
        start = time.perf_counter()

        try:
            (passed, detail) = check()
        except Exception as error:
            self.logger.exception(f'Check {suite}.{name} raised')

            (passed, detail) = (False, f'{type(error).__name__}: {error}')

        elapsed = time.perf_counter() - start

        self.logger.info(f'{"PASS" if passed else "FAIL"} {suite}.{name} ({elapsed:.1f}s): {detail}')

        return CheckResult(suite, name, bool(passed), detail, elapsed)

    # Series

    def check_exact_table(self):
        gf = self.gf if self.gf.precision_bits >= 256 else SeriesContext(256, self.config.max_order)
        ctx = gf.ctx

        worst = ctx.zero

        for h in range(1, 51):
            expected = ctx.one / (36 * h * (h + 1) * (h + 2))

            worst = max(worst, abs(gf.two_point_gf(h) / expected - 1))

        return (worst < ctx.mpf('1e-30'), f'largest relative error {float(worst):.3e} for h <= 50')

    def check_offspring_means(self):
        ctx = self.gf.ctx

        tolerance = ctx.mpf('1e-20')

        theta = self.gf.theta_law().mean()
        nu = self.gf.nu_law().mean()

        passed = abs(theta - 1) < tolerance and abs(nu - 2) < tolerance

        return (passed, f'mean θ = {ctx.nstr(theta, 25)}, mean ν = {ctx.nstr(nu, 25)}')

    def check_two_point_trend(self):
        failures = []

        for lam in TWO_POINT_LAMBDAS:
            limit = self.gf.two_point_scaling_limit(lam)

            errors = [float(abs(self.gf.two_point_ratio(h, lam) / limit - 1)) for h in TWO_POINT_HEIGHTS]

            decreasing = all(b < a for (a, b) in pairwise(errors))

            if not decreasing or errors[-1] >= 5e-2:
                failures.append(f'λ={lam}: errors {[f"{error:.3e}" for error in errors]}')

        return (not failures, '; '.join(failures) or f'errors decrease to below 5e-2 at h={TWO_POINT_HEIGHTS[-1]}')

    def check_singular_coefficients(self):
        gf = SeriesContext(max(512, self.gf.precision_bits), self.config.max_order)
        ctx = gf.ctx

        worst = ctx.zero

        for h in (1, 2, 3, 5):
            fitted = gf.singular_expansion_fit(h)
            exact = gf.singular_coefficients(h)

            for (a, b) in zip(fitted, exact):
                worst = max(worst, abs(a / b - 1))

            size = gf.expected_sphere_size(h) / (54 * ctx.sqrt(6) * fitted[2])

            worst = max(worst, abs(size - 1))

        return (worst < ctx.mpf('1e-6'), f'largest relative error {float(worst):.3e}')

    def check_horohull_limit(self):
        failures = []
        finals = []

        for lam in HOROHULL_LAMBDAS:
            limit = self.gf.perimeter_scaling_limit(lam)

            errors = [float(abs(self.gf.horohull_laplace(r, 0, lam) / limit - 1)) for r in HOROHULL_RADII]

            finals.append(errors[-1])

            if errors[-1] >= 1e-2:
                failures.append(f'λ={lam}: errors {[f"{error:.3e}" for error in errors]}')

        return (not failures, '; '.join(failures) or f'final errors {[f"{error:.3e}" for error in finals]}')

    def check_one_gon_asymptotic(self):
        n_max = max(self.config.max_order, 12)

        counts = series.boundary_counts(1, n_max)

        errors = [float(abs(counts[n] / self.gf.one_gon_asymptotic(n) - 1)) for n in range(n_max // 2, n_max + 1)]

        return (errors[-1] < errors[0], f'ratio error {errors[0]:.3e} at n={n_max // 2}, {errors[-1]:.3e} at n={n_max}')

    # Codecs

    def _pointed_corpus(self):
        if self._pointed is None:
            self._pointed = enumerate_pointed(self.pointed_vertices)

        return self._pointed

    def check_pointed_corpus(self):
        failures = Counter()
        checked = 0

        for t in self._pointed_corpus():
            for (name, round_trip) in self._pointed_round_trips(t):
                try:
                    if not round_trip():
                        failures[name] += 1
                except Exception as error:
                    if self.logger.isEnabledFor(logging.DEBUG):
                        self.logger.debug(f'{name} failed on {pmap.dumps(t)}: {error}')

                    failures[name] += 1

                checked += 1

        return (not failures, f'{checked} round trips, failures {dict(failures) or "none"}')

    def _pointed_round_trips(self, t):
        code = canonical_code(t)
        h = pointed_height(t)

        def delta():
            decomp = delta_skeleton(t)
            back = delta_unskeleton(decomp)

            return (canonical_code(back) == code and delta_skeleton(back) == decomp
                    and skeleton_size(decomp) == t.vertex_count)

        def rho():
            decomp = rho_skeleton(t)
            back = rho_unskeleton(decomp)

            return (canonical_code(back) == code and rho_skeleton(back) == decomp
                    and skeleton_size(decomp) == t.vertex_count)

        def text():
            decomp = delta_skeleton(t)

            return (canonical_code(pmap.loads(pmap.dumps(t))) == code
                    and SkeletonDecomp.from_json(decomp.to_json()) == decomp)

        def cylinders():
            for r in range(1, min(2, h - 1) + 1):
                c = hull(t, r)
                decomp = encode_cylinder(c)
                back = decode_cylinder(decomp)

                if canonical_code(back) != canonical_code(c) or encode_cylinder(back) != decomp:
                    return False

            return True

        def cones():
            for r in range(1, h):
                cone = co_horohull(t, r)
                decomp = encode_cone(cone)
                back = decode_cone(decomp)

                if canonical_code(back) != canonical_code(cone) or encode_cone(back) != decomp:
                    return False

            return True

        def delta_cap():
            cap = horohull(t, 1).with_labels(None)

            return canonical_code(compose_delta_cap(decompose_delta_cap(cap))) == canonical_code(cap)

        def rho_cap_():
            cap = rho_cap(t)

            return canonical_code(compose_rho_cap(decompose_rho_cap(cap))) == canonical_code(cap)

        return [('delta', delta), ('rho', rho), ('text', text), ('cylinder', cylinders),
                ('cone', cones), ('delta_cap', delta_cap), ('rho_cap', rho_cap_)]

    def check_cylinder_corpus(self):
        max_vertices = self.pointed_vertices

        failures = []
        total = 0

        for (r, p, q) in product((1, 2), (1, 2), (1, 2)):
            decomps = enumerate_cylinders(r, p, q, max_vertices)

            sizes = Counter()
            codes = set()

            for decomp in decomps:
                t = decode_cylinder(decomp)

                if encode_cylinder(t) != decomp:
                    failures.append(f'({r}, {p}, {q}): encode∘decode differs for {decomp}')
                    break

                codes.add(canonical_code(t))
                sizes[t.vertex_count] += 1

            if len(codes) != len(decomps):
                failures.append(f'({r}, {p}, {q}): {len(decomps)} decompositions, {len(codes)} maps')

            expected = series.cylinder_counts(r, p, q, max_vertices)

            for n in range(max_vertices + 1):
                if sizes[n] != expected[n]:
                    failures.append(f'({r}, {p}, {q}): {sizes[n]} cylinders with {n} vertices, '
                                    f'series gives {expected[n]}')

            total += len(decomps)

        return (not failures, '; '.join(failures[:5]) or f'{total} cylinder decompositions')

    def _pointed_pieces(self):
        """Cones, δ-caps and ρ-caps cut from the pointed corpus, as sets of codes.

        Cones are keyed by (height, perimeter) and caps by perimeter.
        """
        if self._pieces is None:
            cones = defaultdict(set)
            delta_caps = defaultdict(set)
            rho_caps = defaultdict(set)

            for t in self._pointed_corpus():
                h = pointed_height(t)

                if h >= 2:
                    cone = co_horohull(t, 1)

                    cones[(h - 1, cone.perimeter())].add((cone.vertex_count, canonical_code(cone)))

                cap = anchor_delta_cap(horohull(t, 1).with_labels(None))
                p = cap.perimeter(1) if len(cap.holes) == 2 else 0

                delta_caps[p].add((cap.vertex_count, canonical_code(cap)))

                cap = rho_cap(t)

                rho_caps[cap.perimeter()].add((cap.vertex_count, canonical_code(cap)))

            self._pieces = (cones, delta_caps, rho_caps)

        return self._pieces

    def check_cone_corpus(self):
        # A cone with n vertices is cut from a pointed map with n + 1 vertices.
        max_vertices = self.pointed_vertices - 1

        (observed, _, _) = self._pointed_pieces()

        failures = []
        total = 0

        for (r, q) in product((1, 2, 3), (1, 2, 3)):
            decomps = enumerate_cones(r, q, max_vertices)

            sizes = Counter()
            codes = set()

            for decomp in decomps:
                t = decode_cone(decomp)

                if encode_cone(t) != decomp:
                    failures.append(f'(r={r}, q={q}): encode∘decode differs for {decomp}')
                    break

                codes.add(canonical_code(t))
                sizes[t.vertex_count] += 1

            if len(codes) != len(decomps):
                failures.append(f'(r={r}, q={q}): {len(decomps)} decompositions, {len(codes)} maps')

            cut = {code for (n, code) in observed[(r, q)] if n <= max_vertices}

            if cut != codes:
                failures.append(f'(r={r}, q={q}): {len(codes - cut)} enumerated cones not cut from pointed maps, '
                                f'{len(cut - codes)} cut cones not enumerated')

            expected = series.cone_counts(r, q, max_vertices)

            for n in range(max_vertices + 1):
                if sizes[n] != expected[n]:
                    failures.append(f'(r={r}, q={q}): {sizes[n]} cones with {n} vertices, series gives {expected[n]}')

            total += len(decomps)

        return (not failures, '; '.join(failures[:5]) or f'{total} cone decompositions')

    def check_delta_cap_corpus(self):
        (_, observed, _) = self._pointed_pieces()

        failures = []
        total = 0

        for p in (0, 1, 2):
            # A δ-cap with a hole is cut from a pointed map with at least one more vertex.
            max_vertices = self.pointed_vertices - min(p, 1)

            caps = enumerate_delta_caps(p, max_vertices)

            sizes = Counter()
            codes = set()
            mismatches = 0

            for parts in caps:
                cap = compose_delta_cap(parts)

                if decompose_delta_cap(cap).codes() != parts.codes():
                    mismatches += 1

                codes.add(canonical_code(cap))
                sizes[cap.vertex_count - max(p, 1)] += 1

            if mismatches:
                failures.append(f'p={p}: decompose∘compose differs for {mismatches} δ-caps')

            if len(codes) != len(caps):
                failures.append(f'p={p}: {len(caps)} part lists, {len(codes)} maps')

            cut = {code for (n, code) in observed[p] if n <= max_vertices}

            if cut != codes:
                failures.append(f'p={p}: {len(codes - cut)} enumerated δ-caps not cut from pointed maps, '
                                f'{len(cut - codes)} cut δ-caps not enumerated')

            n_max = max_vertices - max(p, 1)
            expected = series.cap_counts(p, n_max)

            for n in range(n_max + 1):
                if sizes[n] != expected[n]:
                    failures.append(f'p={p}: {sizes[n]} δ-caps with {n} vertices off the hole, '
                                    f'series gives {expected[n]}')

            total += len(caps)

        return (not failures, '; '.join(failures[:5]) or f'{total} δ-caps')

    def check_rho_cap_corpus(self):
        # A ρ-cap with n vertices is cut from a pointed map with n + 1 vertices.
        max_vertices = self.pointed_vertices - 1

        (_, _, observed) = self._pointed_pieces()

        failures = []
        total = 0

        for p in (1, 2):
            caps = enumerate_rho_caps(p, max_vertices)

            codes = set()
            mismatches = 0

            for parts in caps:
                cap = compose_rho_cap(parts)

                if decompose_rho_cap(cap).codes() != parts.codes():
                    mismatches += 1

                codes.add(canonical_code(cap))

            if mismatches:
                failures.append(f'p={p}: decompose∘compose differs for {mismatches} ρ-caps')

            if len(codes) != len(caps):
                failures.append(f'p={p}: {len(caps)} part lists, {len(codes)} maps')

            found = self._marked_polygon_caps(p, max_vertices - p)

            if found != codes:
                failures.append(f'p={p}: {len(found)} marked {p}-gon maps are ρ-caps, {len(codes)} enumerated')

            cut = {code for (n, code) in observed[p] if n <= max_vertices}

            if not cut <= codes:
                failures.append(f'p={p}: {len(cut - codes)} ρ-caps of pointed maps not enumerated')

            total += len(caps)

        return (not failures, '; '.join(failures[:5]) or f'{total} ρ-caps')

    def _marked_polygon_caps(self, p, max_inner):
        """Codes of the p-gon maps, marked at an inner vertex, that decompose as ρ-caps."""
        found = set()

        for maps in enumerate_polygons(p, max_inner).values():
            for t in maps:
                boundary = {t.origin(dart) for dart in t.boundary()}

                for vertex in range(t.vertex_count):
                    if vertex in boundary:
                        continue

                    cap = t.with_marked(vertex_darts(t, vertex)[0])
                    code = canonical_code(cap)

                    try:
                        back = compose_rho_cap(decompose_rho_cap(cap))
                    except (CodecError, MapError):
                        continue

                    if canonical_code(back) == code:
                        found.add(code)

        return found

    def check_polygon_counts(self):
        max_inner = 3 if self.quick else 4

        failures = []

        for p in range(1, 5):
            counts = polygon_counts(p, max_inner)
            expected = [int(value) for value in series.boundary_counts(p, max_inner)]

            if counts != expected:
                failures.append(f'p={p}: {counts} != {expected}')

        return (not failures, '; '.join(failures) or f'p <= 4, n <= {max_inner}')

    def check_two_point_counts(self):
        max_vertices = 6 if self.quick else 8

        counts = Counter((t.vertex_count, pointed_height(t)) for t in self._pointed_corpus())

        failures = []

        for h in range(1, max_vertices):
            expected = series.two_point_counts(h, max_vertices)

            for n in range(max_vertices + 1):
                if counts[(n, h)] != expected[n]:
                    failures.append(f'h={h}, n={n}: {counts[(n, h)]} != {expected[n]}')

        return (not failures, '; '.join(failures[:5]) or f'{sum(counts.values())} pointed maps')

    # Samplers

    def check_sphere_height(self):
        n = self.samples('sphere_height')

        def task(rng, count):
            return Counter(self.sampler.sample_pointed_height(rng) for _ in range(count))

        counts = sum(self.replicate(task, n), Counter())

        failures = []

        for k in range(1, 7):
            probability = float(self.gf.sphere_height_law(k))
            (low, high) = binomial_band(probability, n, SIGMAS)

            if not low <= counts[k] <= high:
                failures.append(f'k={k}: {counts[k]} outside [{low:.0f}, {high:.0f}]')

        return (not failures, '; '.join(failures) or f'P(H=k), k <= 6, within {SIGMAS}σ over {n} samples')

    def _skeleton_key(self, forest, cap):
        counts = forest.child_counts

        if max(counts[v] for g in range(forest.height) for v in forest.generation(g)) > cap:
            return None

        return forest.trees

    def check_skeleton_law(self):
        n = self.samples('skeleton_law')

        threshold = 5e-3 * math.sqrt(max(1.0, FULL_SAMPLES['skeleton_law'] / n))

        failures = []

        for r in (1, 2):
            probabilities = self._skeleton_probabilities(r, 3)

            def task(rng, count):
                return Counter(self._skeleton_key(self.sampler.sample_skel_conditioned(r, rng).forest, 3)
                               for _ in range(count))

            counts = sum(self.replicate(task, n), Counter())

            distance = total_variation(counts, probabilities)

            if distance >= threshold:
                failures.append(f'r={r}: total variation {distance:.3e}')

        return (not failures, '; '.join(failures) or f'total variation below {threshold:.1e} for r <= 2')

    def _skeleton_probabilities(self, r, cap):
        """Exact law of the truncated skeleton, on forests with child counts up to `cap`."""
        probabilities = {}

        levels = [[(c,)] for c in range(1, cap + 1)]

        for _ in range(1, r):
            levels = [[*level, counts] for level in levels for counts in product(range(cap + 1), repeat=sum(level[-1]))]

        for level in levels:
            if sum(level[-1]) == 0:
                continue

            forest = PlaneForest.from_levels([*level, [0] * sum(level[-1])])

            probabilities[forest.trees] = float(self.sampler.conditioned_skel_probability(forest))

        return probabilities

    def check_horohull(self):
        n = self.samples('horohull')

        (r, s1, s2) = (2, 0.9, 0.8)

        max_volume = volume_bound(s1)

        def task(rng, count):
            values = []

            for _ in range(count):
                statistics = self.sampler.horohull_statistics(r + 1, rng, max_volume)

                values.append(statistics.laplace(s1, s2))

            return values

        values = [value for values in self.replicate(task, n) for value in values]

        (mean, width) = mean_band(values, SIGMAS)

        exact = float(self.gf.horohull_joint_gf(r, s1, s2))

        return (abs(mean - exact) <= width, f'Monte-Carlo {mean:.6f} ± {width:.6f}, exact {exact:.6f}')

    def check_extinction(self):
        n = self.samples('extinction')

        k_max = 10

        def task(rng, count):
            return Counter(self.sampler.extinction_generation(1, k_max + 1, rng) for _ in range(count))

        generations = sum(self.replicate(task, n), Counter())

        failures = []

        for k in range(1, k_max + 1):
            extinct = sum(count for (g, count) in generations.items() if g <= k)

            probability = 1 - (k + 1) ** -2

            exact = float(self.gf.extinction_cdf(k))

            (low, high) = binomial_band(probability, n, SIGMAS)

            if not low <= extinct <= high or abs(exact - probability) > 1e-12:
                failures.append(f'k={k}: {extinct} extinct, band [{low:.0f}, {high:.0f}], φ^k(0) = {exact}')

        return (not failures, '; '.join(failures) or f'extinction by k <= {k_max} within {SIGMAS}σ')

    def check_emigrants(self):
        n = self.samples('emigrants')

        failures = []

        for n0 in (4, 16, 64):
            def task(rng, count):
                return sum(1 for _ in range(count) if self.sampler.sample_emigrant_descendants(n0, rng)[-1] == 0)

            zeros = sum(self.replicate(task, n))

            probability = emigrant_extinction_probability(n0)

            (low, high) = binomial_band(probability, n, SIGMAS)

            if not low <= zeros <= high:
                failures.append(f'n0={n0}: {zeros} outside [{low:.0f}, {high:.0f}]')

        return (not failures, '; '.join(failures) or f'P(E_n0 = 0) within {SIGMAS}σ for n0 in 4, 16, 64')

    def check_boltzmann(self):
        n = self.samples('boltzmann')

        (p, max_inner) = (2, 2)

        threshold = 5e-3 * math.sqrt(max(1.0, FULL_SAMPLES['boltzmann'] / n))

        enumerator = Enumerator()
        total = self.sampler.weight(p)

        probabilities = {}

        for inner in range(max_inner + 1):
            for word in enumerator.words(p, inner):
                probabilities[word] = float(self.gf.x_c ** inner / total)

        def task(rng, count):
            return Counter(self.sampler.sample_boltzmann_word(p, rng, max_inner) for _ in range(count))

        counts = sum(self.replicate(task, n), Counter())

        distance = total_variation(counts, probabilities)

        return (distance < threshold, f'total variation {distance:.3e} over {len(probabilities)} maps')

    def check_chord_free(self):
        n = self.samples('chord_free')

        x_c = float(self.gf.x_c)

        failures = []
        frequencies = []

        for p in (3, 4, 5):
            def task(rng, count):
                return sum(1 for _ in range(count) if self.sampler.sample_chord_free(p, rng))

            free = sum(self.replicate(task, n))

            (low, _) = binomial_band(x_c, n, SIGMAS)

            frequencies.append(f'p={p}: {free / n:.4f}')

            if free < low:
                failures.append(f'p={p}: {free} chord-free below {low:.0f}')

        return (not failures, '; '.join(failures) or ', '.join(frequencies))

    # Geodesics

    def check_event_fixture(self):
        decomp = event_fixture()

        report = detect_event_G(decomp, 3)

        if not report.occurred:
            return (False, f'event not detected: {report.to_dict()}')

        cylinder = Cylinder(decode_cylinder(decomp))

        return (forcing_holds(decomp, report, cylinder), f'v_r at height {report.c3[1]}')

    def check_forcing(self):
        n = self.samples('forcing')

        r = 3
        q = round(COALESCENCE_Q_RULE * r * r)

        def task(rng, count):
            outcomes = Counter()

            for _ in range(count):
                decomp = self.sampler.sample_cylinder_from_gw(q, r, rng).decomp

                report = detect_event_G(decomp, r)

                if not report.occurred:
                    outcomes['no event'] += 1
                elif forcing_holds(decomp, report, Cylinder(decode_cylinder(decomp))):
                    outcomes['forced'] += 1
                else:
                    outcomes['violated'] += 1

            return outcomes

        outcomes = sum(self.replicate(task, n), Counter())

        return (outcomes['violated'] == 0, f'{dict(outcomes)} over {n} cylinders at r={r}')

    def check_coalescence(self):
        n = self.samples('coalescence')

        scales = COALESCENCE_SCALES[:1] if self.quick else COALESCENCE_SCALES

        failures = []
        rows = []

        for r in scales:
            row = estimate_coalescence(self.sampler, r, COALESCENCE_Q_RULE, n, self.replicate)

            rows.append(f'r={r}: {row["estimate"]:.4f} [{row["low"]:.4f}, {row["high"]:.4f}]')

            if row['estimate'] < 0.01:
                failures.append(rows[-1])

        return (not failures, '; '.join(rows))

def estimate_coalescence(sampler, r, q_rule, n, replicate_):
    """Frequency of the coalescence event at scale r with its Wilson interval.

    Cylinders are drawn as forests only; the chord-free condition is drawn
    for the slot under examination.
    """
    q = max(1, round(q_rule * r * r))

    def task(rng, count):
        (events, resampled) = (0, 0)

        for _ in range(count):
            (forest, redraws) = sampler.sample_cylinder_forest(q, r, rng)

            decomp = SkeletonDecomp('cylinder', forest, {}, marked=forest.generation(r)[0])

            report = detect_event_G(decomp, r, chord_free=lambda perimeter: sampler.sample_chord_free(perimeter, rng))

            events += int(report.occurred)
            resampled += redraws

        return (events, resampled)

    results = replicate_(task, n)

    events = sum(events for (events, _) in results)
    resampled = sum(resampled for (_, resampled) in results)

    if resampled:
        logger.warning(f'Redrew {resampled} forests that died before height {r}')

    (low, high) = wilson_interval(events, n)

    return {'r': r, 'q': q, 'samples': n, 'events': events, 'estimate': events / n,
            'low': low, 'high': high, 'resampled': resampled}

def event_fixture():
    """A cylinder decomposition at scale 3 where the coalescence event occurs.

    The first top vertex carries a chord-free slot of perimeter 9 and the
    next generation has 27 vertices; only the first slot vertex and its
    neighbour have children, so the geodesics bounding the far side meet
    two generations down.
    """
    second = [0, 1, 2] + [0] * 24

    forest = PlaneForest.from_levels([[7, 20], second, [1, 1, 1], [0, 0, 0]])

    slots = {}

    for vertex in range(len(forest)):
        if forest.depth(vertex) < 3:
            slots[vertex] = fan_triangulation(forest.child_counts[vertex] + 2)

    slots[0] = needle_triangulation(9)

    return SkeletonDecomp('cylinder', forest, slots, marked=forest.generation(3)[0])
