"""
skelmap.config
~~~~~~~~~~~~~~
"""

import os
import logging
from dataclasses import dataclass, field, asdict

from .gf import DEFAULT_PRECISION_BITS, DEFAULT_MAX_ORDER

logger = logging.getLogger(__name__)

DEFAULT_SEED = 0
DEFAULT_STREAMS = 1

FORMATS = ('json', 'csv')

@dataclass
class ExperimentConfig:
    """Settings of one run, embedded in every output it writes."""

    seed: int = DEFAULT_SEED
    stream_count: int = DEFAULT_STREAMS
    precision_bits: int = DEFAULT_PRECISION_BITS
    max_order: int = DEFAULT_MAX_ORDER
    sample_counts: dict = field(default_factory=dict)
    output_path: str = None
    format: str = 'json'
    workers: int = None

    def samples(self, name, default):
        """Sample count for `name`, the `default` count unless overridden."""
        return self.sample_counts.get(name, self.sample_counts.get('default', default))

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_args(cls, args):
        """Combine command line arguments with the environment; arguments win."""
        config = cls.from_environment()

        for (name, attribute) in [('seed', 'seed'), ('streams', 'stream_count'),
                                  ('precision_bits', 'precision_bits'), ('max_order', 'max_order'),
                                  ('out', 'output_path'), ('format', 'format'),
                                  ('workers', 'workers')]:
            value = getattr(args, name, None)

            if value is not None:
                setattr(config, attribute, value)

        samples = getattr(args, 'samples', None)

        if samples is not None:
            config.sample_counts = {'default': samples}

        return config

    @classmethod
    def from_environment(cls):
        config = cls()

        for (attribute, value) in [('precision_bits', _get_precision_bits()),
                                   ('max_order', _get_max_order()),
                                   ('workers', _get_workers()),
                                   ('seed', _get_seed())]:
            if value is not None:
                setattr(config, attribute, value)

        return config

def _get_int(name, minimum):
    value = os.environ.get(name)

    if value is None:
        return None

    try:
        number = int(value)
    except ValueError:
        logger.warning(f'Unsupported {name} option: {value}')

        return None

    if number < minimum:
        logger.warning(f'Unsupported {name} option: {value}')

        return None

    return number

def _get_precision_bits():
    return _get_int('SKELMAP_PRECISION_BITS', 32)

def _get_max_order():
    return _get_int('SKELMAP_MAX_ORDER', 0)

def _get_workers():
    return _get_int('SKELMAP_WORKERS', 1)

def _get_seed():
    return _get_int('SKELMAP_SEED', 0)
