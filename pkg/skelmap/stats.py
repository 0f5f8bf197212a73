"""
skelmap.stats
~~~~~~~~~~~~~

Confidence intervals and distances used to compare samples with exact laws.
"""

import math
from collections import Counter
import numpy

def wilson_interval(successes, n, z=1.96):
    """Wilson score interval (low, high) for a binomial proportion."""
    if n <= 0:
        raise ValueError(f'n must be positive, got {n}')

    p_hat = successes / n

    z2 = z * z
    denominator = 1.0 + z2 / n
    center = (p_hat + z2 / (2.0 * n)) / denominator
    margin = z * math.sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denominator

    return (max(0.0, center - margin), min(1.0, center + margin))

def binomial_band(p, n, sigmas=4):
    """Interval of counts within `sigmas` standard deviations of n p."""
    mean = n * p
    deviation = sigmas * math.sqrt(n * p * (1.0 - p))

    return (mean - deviation, mean + deviation)

def within_binomial_band(count, n, p, sigmas=4):
    (low, high) = binomial_band(float(p), n, sigmas)

    return low <= count <= high

def mean_band(values, sigmas=4):
    """(mean, half width) of the `sigmas` band around a sample mean."""
    values = numpy.asarray(values, dtype=float)

    if len(values) < 2:
        raise ValueError('at least two values are required')

    return (float(values.mean()), sigmas * float(values.std(ddof=1)) / math.sqrt(len(values)))

def within_mean_band(values, expected, sigmas=4):
    (mean, width) = mean_band(values, sigmas)

    return abs(mean - float(expected)) <= width

def total_variation(counts, probabilities):
    """Distance between the empirical law of `counts` and an exact law.

    Outcomes missing from `probabilities` form one remaining outcome, whose
    exact probability is what `probabilities` leaves.
    """
    counts = Counter(counts)

    n = sum(counts.values())

    if n == 0:
        raise ValueError('no samples')

    distance = 0.0
    covered = 0

    for (outcome, probability) in probabilities.items():
        count = counts.get(outcome, 0)

        distance += abs(count / n - float(probability))
        covered += count

    remaining = 1.0 - sum(float(probability) for probability in probabilities.values())

    distance += abs((n - covered) / n - remaining)

    return distance / 2

def histogram(values, size):
    """Counts of 0..size-1 among integer values, larger values in the last bucket."""
    values = numpy.minimum(numpy.asarray(values, dtype=numpy.int64), size - 1)

    return numpy.bincount(values, minlength=size)
