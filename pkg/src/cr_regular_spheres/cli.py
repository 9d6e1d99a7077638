"""
Command-line entry point: ``cr-spheres <command> [options]``.

Each sub-command lives in its own module under ``cr_regular_spheres.commands`` and
registers itself through ``add_parser``.
"""
import argparse
import logging
import sys
from typing import List, Optional

from cr_regular_spheres import __version__
from cr_regular_spheres.commands import (
    EXIT_DATA, EXIT_DISAGREEMENT, EXIT_NO_INPUT, EXIT_USAGE, construct, identity, minimize, profile,
    verify,
)
from cr_regular_spheres.errors import (
    ConfigError, CriterionDisagreement, DimensionError, EmbeddingError, RankToleranceError, SerializationError,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'
COMMANDS = (construct, identity, verify, minimize, profile)


class UsageParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def build_parser() -> argparse.ArgumentParser:
    parser = UsageParser(prog='cr-spheres', description='CR regular embeddings of odd-dimensional spheres')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='warnings and errors only')
    subparsers = parser.add_subparsers(dest='command', required=True, parser_class=UsageParser)
    for command in COMMANDS:
        command.add_parser(subparsers)
    return parser


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    setup_logging(args.verbose, args.quiet)

    try:
        return args.handler(args)
    except FileNotFoundError as e:
        logger.error('missing input: %s', e.filename or e)
        return EXIT_NO_INPUT
    except SerializationError as e:
        logger.error('malformed input: %s', e)
        return EXIT_DATA
    except (ConfigError, EmbeddingError, DimensionError) as e:
        logger.error('%s', e)
        return EXIT_USAGE
    except CriterionDisagreement as e:
        logger.error('%s', e)
        return EXIT_DISAGREEMENT
    except RankToleranceError as e:
        logger.error('undecidable rank: %s', e)
        return EXIT_DISAGREEMENT


def run():
    sys.exit(main())


if __name__ == '__main__':
    run()
