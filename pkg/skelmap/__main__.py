import sys
import logging

from .args import parse_args
from .config import ExperimentConfig
from .commands import (cmd_verify, cmd_twopoint, cmd_horohull, cmd_enumerate, cmd_sample,
                       cmd_coalescence, write_report)
from .forest import ForestError
from .gf import DomainError, FitError, TruncationError
from .hull import RadiusError
from .oracle import BudgetExceededError
from .samplers import SamplerError
from .series import SeriesError
from .skeleton import CodecError
from .triangulation import MapError

logging.basicConfig(level=logging.INFO)

logger = logging.getLogger('skelmap.main')

ERRORS = (BudgetExceededError, CodecError, DomainError, FitError, ForestError, MapError, RadiusError,
          SamplerError, SeriesError, TruncationError)

def _run(args, config):
    if args.command == 'verify':
        return cmd_verify(config, args.suite, args.quick)

    if args.command == 'twopoint':
        return (0, cmd_twopoint(config, args.h_list, args.lambda_list))

    if args.command == 'horohull':
        return (0, cmd_horohull(config, args.r_list, args.lambda1, args.lambda2))

    if args.command == 'enumerate':
        return (0, cmd_enumerate(config, args.p, args.n_max))

    if args.command == 'sample':
        return (0, cmd_sample(config, args.kind, args.p, args.q, args.r))

    if args.command == 'coalescence':
        return (0, cmd_coalescence(config, args.r_list, args.q_rule))

    raise ValueError('Unsupported command')

def main(argv=None):
    args = parse_args(sys.argv[1:] if argv is None else argv)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    config = ExperimentConfig.from_args(args)

    logger.info(f'Starting {args.command}...')

    try:
        (code, report) = _run(args, config)
    except ERRORS as error:
        logger.error(f'{args.command} failed: {error}', exc_info=error)

        return 1

    write_report(report, config)

    logger.info(f'Finished {args.command} with exit code {code}')

    return code

if __name__ == '__main__':
    sys.exit(main())
