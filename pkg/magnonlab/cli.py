"""
Command Line Interface
"""
import sys
from argparse import ArgumentParser
import warnings

import magnonlab
import magnonlab.driver
from magnonlab.utils import (EXPERIMENTS, ExperimentConfig, ConfigError,
                             MagnonLabError)

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def parse_overrides(extra):
    """Turn leftover `--key value` / `--key=value` tokens into a dict.

    Args:
        extra (list): tokens argparse did not recognize

    Returns:
        dict: raw string values keyed by parameter name
    """
    overrides = {}
    tokens = list(extra)
    while tokens:
        token = tokens.pop(0)
        if not token.startswith('--') or len(token) < 3:
            raise ConfigError(token, "expected --key value")
        key = token[2:]
        if '=' in key:
            key, value = key.split('=', 1)
        elif tokens and not tokens[0].startswith('--'):
            value = tokens.pop(0)
        else:
            raise ConfigError(key, "missing value")
        overrides[key] = value
    return overrides


def build_parser():
    psr = ArgumentParser(
        description="magnon-lab: pairwise concurrence of one-particle states "
                    "in Harper, kicked Harper and random-matrix models",
        prog='magnon-lab', allow_abbrev=False,
        epilog="Any other --key value pair overrides a configuration parameter."
    )
    psr.add_argument('--version',
        action='version',
        version="%(prog)s {}".format(magnonlab.__version__),
        help="Print version number and exit."
    )
    psr.add_argument('experiment', choices=EXPERIMENTS,
                     help="experiment to run")
    psr.add_argument('-c', '--config', metavar='FILE', type=str, default=None,
                     help="key = value configuration file")
    psr.add_argument('-o', '--out', metavar='DIR', type=str, default=None,
                     help="output directory [./<experiment>]")
    psr.add_argument('--seed', type=int, default=None,
                     help="master seed [0]")
    psr.add_argument('--svg', action='store_true',
                     help="also write SVG plots [default=False]")
    psr.add_argument('--verbose', action='store_true',
                     help="Print extra messages and progress bars")
    return psr


def main(argv=None):
    warnings.simplefilter("ignore")
    warnings.simplefilter('once', DeprecationWarning)

    psr = build_parser()
    args, extra = psr.parse_known_args(argv)

    try:
        overrides = parse_overrides(extra)
        config = ExperimentConfig.from_sources(args.experiment,
                                               config_file=args.config,
                                               overrides=overrides,
                                               output_dir=args.out,
                                               seed=args.seed,
                                               svg=args.svg)
    except ConfigError as err:
        print("magnon-lab {}: configuration error: {}".format(args.experiment, err),
              file=sys.stderr)
        return EXIT_CONFIG

    if args.verbose:
        print("Running {} (config {})".format(config.experiment, config.config_hash()))
        for line in config.echo():
            print("  " + line)

    try:
        written = magnonlab.driver.run(config, verbose=args.verbose)
    except ConfigError as err:
        print("magnon-lab {}: configuration error: {}".format(args.experiment, err),
              file=sys.stderr)
        return EXIT_CONFIG
    except MagnonLabError as err:
        print("magnon-lab {}: numerical failure: {}".format(args.experiment, err),
              file=sys.stderr)
        return EXIT_NUMERICAL

    if args.verbose:
        print("{} file(s) written to {}".format(len(written), config.output_dir))
    return 0


if __name__ == '__main__':
    sys.exit(main())
