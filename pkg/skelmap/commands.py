"""
skelmap.commands
~~~~~~~~~~~~~~~~

Command implementations. Every command returns a report, a dict with the
command name, the ExperimentConfig it ran with and a list of rows; reports are
written as JSON, or as CSV rows under a commented config line.
"""

import sys
import csv
import json
import math
import logging
from functools import partial

from . import pmap
from .gf import SeriesContext
from .hull import height as pointed_height
from .oracle import enumerate_polygons
from .rng import replicate
from .samplers import Sampler, volume_bound
from .verify import Verifier, estimate_coalescence

logger = logging.getLogger(__name__)

DEFAULT_HOROHULL_SAMPLES = 10_000
DEFAULT_COALESCENCE_SAMPLES = 1_000

def _number(value):
    """Plain float for mpmath numbers, unchanged otherwise."""
    if value is None or isinstance(value, (bool, int, str)):
        return value

    return float(value)

def _report(command, config, rows, **extra):
    return {'command': command, 'config': config.to_dict(), **extra, 'rows': rows}

def _replicate(config, task, total):
    return replicate(task, total, config.seed, config.stream_count, config.workers)

def _context(config):
    return SeriesContext(config.precision_bits, config.max_order)

def cmd_verify(config, suite='all', quick=False):
    """Run acceptance checks; returns (exit code, report)."""
    verifier = Verifier(config, quick=quick)

    results = verifier.run(suite)

    rows = [{'suite': result.suite, 'check': result.name, 'passed': result.passed,
             'detail': result.detail, 'elapsed': round(result.elapsed, 3)} for result in results]

    passed = all(result.passed for result in results)

    return (0 if passed else 1, _report('verify', config, rows, suite=suite, quick=quick, passed=passed))

def cmd_twopoint(config, h_list, lambda_list):
    """G_h(x_c e^{−λ/h⁴})/G_h(x_c) next to its scaling limit."""
    gf = _context(config)

    rows = []

    for lam in lambda_list:
        limit = gf.two_point_scaling_limit(lam)

        for h in h_list:
            ratio = gf.two_point_ratio(h, lam)

            rows.append({'h': h, 'lambda': lam, 'ratio': _number(ratio), 'limit': _number(limit),
                         'relative_error': _number(abs(ratio / limit - 1))})

    return _report('twopoint', config, rows)

def conditional_laplace(gf, forest, r, s1, s2):
    """E[s1^{|H_r|} s2^{|∂H_r|} | [Skel]_r] of a skeleton sampled to generation r."""
    child_counts = [forest.child_counts[0]]
    child_counts.extend(forest.child_counts[vertex] for g in range(1, r) for vertex in forest.generation(g))

    sizes = [len(forest.generation(g)) for g in range(1, r + 1)]

    return float(gf.conditional_horohull_gf(child_counts, sizes, s1, s2))

def cmd_horohull(config, r_list, lambda1, lambda2):
    """Laplace transform of (|H_r|/r⁴, |∂H_r|/r²): Monte-Carlo, conditional, exact and limit."""
    gf = _context(config)
    sampler = Sampler(gf)

    n = config.samples('horohull', DEFAULT_HOROHULL_SAMPLES)

    limit = gf.horohull_scaling_limit(lambda1, lambda2)

    rows = []

    for r in r_list:
        s1 = math.exp(-lambda1 / r ** 4)
        s2 = math.exp(-lambda2 / r ** 2)

        max_volume = volume_bound(s1)

        def task(rng, count):
            values = []

            for _ in range(count):
                statistics = sampler.horohull_statistics(r, rng, max_volume)

                if statistics.skel is None:
                    conditional = 0.0
                else:
                    conditional = conditional_laplace(gf, statistics.skel.forest, r, s1, s2)

                values.append((statistics.laplace(s1, s2), conditional))

            return values

        values = [value for values in _replicate(config, task, n) for value in values]

        exact = gf.horohull_laplace(r, lambda1, lambda2) if r >= 2 else None

        row = {'r': r, 'samples': n, 'lambda1': lambda1, 'lambda2': lambda2}

        for (index, name) in enumerate(('plain', 'conditional')):
            column = [value[index] for value in values]

            mean = math.fsum(column) / n
            deviation = math.sqrt(math.fsum((x - mean) ** 2 for x in column) / max(n - 1, 1))

            row[name] = mean
            row[f'{name}_stderr'] = deviation / math.sqrt(n)

        row['exact'] = _number(exact)
        row['limit'] = _number(limit)

        logger.info(f'r={r}: plain {row["plain"]:.6f}, conditional {row["conditional"]:.6f}, '
                    f'exact {row["exact"]}')

        rows.append(row)

    return _report('horohull', config, rows)

def cmd_enumerate(config, p, n_max):
    """All triangulations of the p-gon with at most n_max inner vertices."""
    gf = _context(config)

    corpus = enumerate_polygons(p, n_max)

    expected = gf.boundary_counts(p, n_max)

    rows = [{'inner': inner, 'count': len(maps), 'series': int(expected[inner])}
            for (inner, maps) in corpus.items()]

    maps = [t for maps in corpus.values() for t in maps]

    if config.output_path is not None and config.output_path.endswith('.pmap'):
        with open(config.output_path, 'w') as file:
            pmap.dump_corpus(maps, file)

        logger.info(f'Wrote {len(maps)} maps to {config.output_path}')

    return _report('enumerate', config, rows, p=p, maps=[pmap.dumps(t) for t in maps])

def _sample_record(sampler, kind, p, q, r, rng):
    if kind == 'polygon':
        t = sampler.sample_boltzmann_polygon(p, rng)

        return {'inner_vertices': t.inner_vertex_count(), 'pmap': pmap.dumps(t)}

    if kind == 'cap':
        t = sampler.sample_boltzmann_delta_cap(p, rng)

        return {'vertices': t.vertex_count, 'pmap': pmap.dumps(t)}

    if kind == 'pointed':
        t = sampler.sample_pointed_boltzmann(rng)

        return {'vertices': t.vertex_count, 'height': pointed_height(t), 'pmap': pmap.dumps(t)}

    if kind == 'horohull':
        sample = sampler.sample_uipt_horohull(r, rng)

        return {'r': r, 'perimeter': sample.perimeter, 'volume': sample.volume,
                'forest': sample.skel.forest.to_json(), 'pmap': pmap.dumps(sample.map)}

    if kind == 'cylinder':
        sample = sampler.sample_cylinder_from_gw(q, r, rng)

        return {'r': r, 'q': q, 'vertices': sample.map.vertex_count, 'resampled': sample.resampled,
                'decomposition': sample.decomp.to_json(), 'pmap': pmap.dumps(sample.map)}

    if kind == 'skeleton':
        skel = sampler.sample_skel_conditioned(r, rng)

        return {'r': r, 'forest': skel.forest.to_json(), 'spine': skel.spine}

    raise ValueError(f'invalid sample kind: {kind}')

def cmd_sample(config, kind, p=None, q=None, r=None):
    """Draw random maps or skeletons, one record per sample."""
    sampler = Sampler(_context(config))

    n = config.samples('sample', 1)

    def task(rng, count):
        return [{'stream': rng.stream_id, 'index': index, **_sample_record(sampler, kind, p, q, r, rng)}
                for index in range(count)]

    rows = [record for records in _replicate(config, task, n) for record in records]

    resampled = sum(row.get('resampled', 0) for row in rows)

    if resampled:
        logger.warning(f'Redrew {resampled} forests that died before height {r}')

    return _report('sample', config, rows, kind=kind)

def cmd_coalescence(config, r_list, q_rule):
    """Frequency of the coalescence event per scale, with Wilson intervals."""
    sampler = Sampler(_context(config))

    n = config.samples('coalescence', DEFAULT_COALESCENCE_SAMPLES)

    rows = []

    for r in r_list:
        row = estimate_coalescence(sampler, r, q_rule, n, partial(_replicate, config))

        logger.info(f'r={r}: {row["events"]} events in {n} cylinders, '
                    f'interval [{row["low"]:.4f}, {row["high"]:.4f}]')

        rows.append(row)

    return _report('coalescence', config, rows, q_rule=q_rule)

def _csv_value(value):
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)

    return value

def write_report(report, config, file=None):
    """Write a report in the configured format to the output path, or to `file`."""
    if config.output_path is not None and file is None and not config.output_path.endswith('.pmap'):
        with open(config.output_path, 'w', newline='') as output:
            _write(report, config.format, output)

        logger.info(f'Wrote {config.format} report to {config.output_path}')

        return

    _write(report, config.format, file if file is not None else sys.stdout)

def _write(report, format, file):
    if format == 'json':
        json.dump(report, file, indent=2)
        file.write('\n')

        return

    rows = report['rows']

    file.write(f'# config: {json.dumps(report["config"], sort_keys=True)}\n')

    fieldnames = []

    for row in rows:
        fieldnames.extend(key for key in row if key not in fieldnames)

    writer = csv.DictWriter(file, fieldnames=fieldnames, lineterminator='\n')

    writer.writeheader()

    for row in rows:
        writer.writerow({key: _csv_value(value) for (key, value) in row.items()})
