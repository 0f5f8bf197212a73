"""
skelmap.rng
~~~~~~~~~~~
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from more_itertools import distribute, ilen
import numpy

logger = logging.getLogger(__name__)

class RngStream:
    """Reproducible random stream identified by (seed, stream_id).

    Streams with distinct ids are independent children of the same seed.
    """

    def __init__(self, seed, stream_id=0):
        self.seed = seed
        self.stream_id = stream_id

        sequence = numpy.random.SeedSequence(entropy=seed, spawn_key=(stream_id,))

        self.generator = numpy.random.default_rng(sequence)

    def __repr__(self):
        return f'<RngStream seed={self.seed} stream_id={self.stream_id}>'

    def random(self, size=None):
        return self.generator.random(size)

    def integers(self, low, high=None, size=None):
        return self.generator.integers(low, high, size=size)

    def uniform_index(self, n):
        """Uniform index in 0..n-1."""
        return int(self.generator.integers(n))

def streams(seed, count):
    return [RngStream(seed, stream_id) for stream_id in range(count)]

def stream_shares(total, count):
    """Samples per stream when `total` samples are spread over `count` streams."""
    if count < 1:
        raise ValueError(f'invalid stream count: {count}')

    return [ilen(part) for part in distribute(count, range(total))]

def replicate(task, total, seed, stream_count=1, workers=None):
    """Run task(rng, count) on every stream with a share of `total` samples.

    Results come back in stream id order whatever order the workers finish
    in; streams with no samples are skipped.
    """
    shares = stream_shares(total, stream_count)

    jobs = [(RngStream(seed, stream_id), share) for (stream_id, share) in enumerate(shares) if share]

    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(f'Running {total} samples on {len(jobs)} streams of seed {seed}')

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(task, rng, share) for (rng, share) in jobs]

        return [future.result() for future in futures]
