import argparse
from pathlib import Path
from typing import Dict, Optional

from cr_regular_spheres import __version__
from cr_regular_spheres.config import WORKERS_ENV_VAR, default_workers
from cr_regular_spheres.storage import file_sha256
from cr_regular_spheres.structures import RunManifest

EXIT_OK = 0
EXIT_IDENTITY_FAILURE = 1
EXIT_IRREGULAR = 2
EXIT_DISAGREEMENT = 3
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NO_INPUT = 66


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected an integer, got {text!r}') from None
    if value < 1:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {value}')
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected a number, got {text!r}') from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f'expected a positive number, got {value}')
    return value


def add_workers_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '--workers', type=positive_int, default=None,
        help=f'worker processes (default: ${WORKERS_ENV_VAR} or the CPU count); never changes results',
    )


def resolve_workers(args: argparse.Namespace) -> int:
    return args.workers if args.workers is not None else default_workers()


def build_manifest(command: str, config: Dict, inputs: Optional[Dict[str, Path]] = None) -> RunManifest:
    return RunManifest(
        command=command,
        config=config,
        inputs={name: file_sha256(path) for name, path in (inputs or {}).items()},
        version=__version__,
    )
