import argparse
import logging
from pathlib import Path

from cr_regular_spheres.catalog import PRESETS, make_preset
from cr_regular_spheres.commands import EXIT_OK, build_manifest, positive_int
from cr_regular_spheres.storage import save_embedding, save_manifest

logger = logging.getLogger(__name__)


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser('construct', help='write a catalog embedding as JSON')
    parser.add_argument('--preset', required=True, choices=sorted(PRESETS), help='catalog entry to construct')
    parser.add_argument('--n', type=int, default=None, help='block count for q-block')
    parser.add_argument('--m', type=positive_int, default=None, help='complex dimension for corollary and controls')
    parser.add_argument('--out', type=Path, required=True, help='output JSON path')
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    embedding = make_preset(args.preset, n=args.n, m=args.m)
    save_embedding(args.out, embedding)
    save_manifest(args.out, build_manifest('construct', {'preset': args.preset, 'n': args.n, 'm': args.m}))
    logger.info('constructed %s', embedding.label)
    print(f'{embedding.label}: S^{2 * embedding.m - 1} -> C^{embedding.m + embedding.q} written to {args.out}')
    return EXIT_OK
