"""
skelmap.args
~~~~~~~~~~~~
"""

import argparse
import logging

from .config import FORMATS

logger = logging.getLogger(__name__)

SUITES = ('all', 'series', 'codec', 'samplers', 'geodesics')

SAMPLE_KINDS = ('polygon', 'cap', 'pointed', 'horohull', 'cylinder', 'skeleton')

MAX_SEED = 2 ** 64

def parse_args(args):
    parser = argparse.ArgumentParser(prog='skelmap',
                                     description='Skeleton decompositions of random planar triangulations')

    common = argparse.ArgumentParser(add_help=False)

    common.add_argument('--seed', type=get_seed, help='random seed')
    common.add_argument('--streams', type=get_positive_int, metavar='count',
                        help='number of independent random streams')
    common.add_argument('--workers', type=get_positive_int, metavar='count',
                        help='worker threads')
    common.add_argument('--precision-bits', type=get_precision_bits, metavar='bits',
                        dest='precision_bits', help='working precision')
    common.add_argument('--max-order', type=get_nonnegative_int, metavar='order',
                        dest='max_order', help='order of exact series coefficients')
    common.add_argument('--samples', type=get_positive_int, metavar='count',
                        help='Monte-Carlo sample count')
    common.add_argument('--out', metavar='path', help='output file, standard output by default')
    common.add_argument('--format', choices=FORMATS, help='output format: json, csv')
    common.add_argument('--verbose', action='store_true', help='debug logging')

    subparsers = parser.add_subparsers(dest='command', required=True, description='command')

    verify_parser = subparsers.add_parser('verify', parents=[common],
                                          description='Run acceptance checks',
                                          help='run acceptance checks')

    verify_parser.add_argument('suite', nargs='?', choices=SUITES, default='all',
                               help='suite: all, series, codec, samplers, geodesics')
    verify_parser.add_argument('--quick', action='store_true',
                               help='reduced sample counts and corpora')

    twopoint_parser = subparsers.add_parser('twopoint', parents=[common],
                                            description='Two-point function against its scaling limit',
                                            help='two-point function table')

    twopoint_parser.add_argument('--h', type=get_int_list, default=[125, 250, 500, 1000, 2000],
                                 dest='h_list', metavar='h[,h...]', help='distances')
    twopoint_parser.add_argument('--lambda', type=get_float_list, default=[0.25, 1.0, 4.0],
                                 dest='lambda_list', metavar='λ[,λ...]', help='Laplace parameters')

    horohull_parser = subparsers.add_parser('horohull', parents=[common],
                                            description='Horohull volume and perimeter Laplace functionals',
                                            help='horohull table')

    horohull_parser.add_argument('--r', type=get_int_list, default=[1, 2, 4, 8], dest='r_list',
                                 metavar='r[,r...]', help='radii')
    horohull_parser.add_argument('--lambda1', type=get_nonnegative_float, default=0.0,
                                 metavar='λ1', help='volume parameter')
    horohull_parser.add_argument('--lambda2', type=get_nonnegative_float, default=1.0,
                                 metavar='λ2', help='perimeter parameter')

    enumerate_parser = subparsers.add_parser('enumerate', parents=[common],
                                             description='List small triangulations of the p-gon',
                                             help='enumerate triangulations')

    enumerate_parser.add_argument('p', type=get_positive_int, help='perimeter')
    enumerate_parser.add_argument('n_max', type=get_nonnegative_int, help='maximum inner vertex count')

    sample_parser = subparsers.add_parser('sample', parents=[common],
                                          description='Draw random triangulations',
                                          help='draw random triangulations')

    sample_parser.add_argument('kind', choices=SAMPLE_KINDS,
                               help='polygon, cap, pointed, horohull, cylinder, skeleton')
    sample_parser.add_argument('--p', type=get_nonnegative_int, help='perimeter')
    sample_parser.add_argument('--q', type=get_positive_int, help='number of trees')
    sample_parser.add_argument('--r', type=get_positive_int, help='radius or height')

    coalescence_parser = subparsers.add_parser('coalescence', parents=[common],
                                               description='Estimate the probability of the coalescence event',
                                               help='geodesic coalescence estimates')

    coalescence_parser.add_argument('--r', type=get_int_list, default=[8, 16, 32], dest='r_list',
                                    metavar='r[,r...]', help='scales')
    coalescence_parser.add_argument('--q-rule', type=get_positive_float, default=3.5, dest='q_rule',
                                    metavar='factor', help='top perimeter as a multiple of r²')

    args = parser.parse_args(args)

    if args.command == 'sample':
        check_sample_args(args, parser)

    if args.command == 'coalescence':
        for r in args.r_list:
            if r < 2:
                parser.error(f'argument --r: invalid scale: {r}')

    if args.command in ('twopoint', 'horohull'):
        values = args.h_list if args.command == 'twopoint' else args.r_list

        for value in values:
            if value < 1:
                parser.error(f'argument {"--h" if args.command == "twopoint" else "--r"}: '
                             f'invalid value: {value}')

    return args

def check_sample_args(args, parser):
    if args.kind in ('polygon', 'cap') and args.p is None:
        parser.error(f'argument --p: required for {args.kind}')

    if args.kind == 'polygon' and args.p is not None and args.p < 1:
        parser.error(f'argument --p: invalid perimeter: {args.p}')

    if args.kind in ('horohull', 'cylinder', 'skeleton') and args.r is None:
        parser.error(f'argument --r: required for {args.kind}')

    if args.kind == 'cylinder' and args.q is None:
        parser.error('argument --q: required for cylinder')

def get_positive_int(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'invalid integer: {value}')

    if number < 1:
        raise argparse.ArgumentTypeError(f'invalid positive integer: {value}')

    return number

def get_nonnegative_int(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'invalid integer: {value}')

    if number < 0:
        raise argparse.ArgumentTypeError(f'invalid nonnegative integer: {value}')

    return number

def get_seed(value):
    number = get_nonnegative_int(value)

    if number >= MAX_SEED:
        raise argparse.ArgumentTypeError(f'invalid seed: {value}')

    return number

def get_precision_bits(value):
    number = get_positive_int(value)

    if number < 32:
        raise argparse.ArgumentTypeError(f'invalid precision: {value}')

    return number

def get_positive_float(value):
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'invalid number: {value}')

    if not number > 0:
        raise argparse.ArgumentTypeError(f'invalid positive number: {value}')

    return number

def get_nonnegative_float(value):
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'invalid number: {value}')

    if not number >= 0:
        raise argparse.ArgumentTypeError(f'invalid nonnegative number: {value}')

    return number

def get_int_list(value):
    try:
        return [int(element) for element in value.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f'invalid integer list: {value}')

def get_float_list(value):
    numbers = []

    for element in value.split(','):
        numbers.append(get_nonnegative_float(element))

    return numbers
