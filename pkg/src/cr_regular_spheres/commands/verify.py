import argparse
import logging
import time
from pathlib import Path

from cr_regular_spheres.certifier import sample_points, sigma_histogram, sweep
from cr_regular_spheres.commands import (
    EXIT_DISAGREEMENT, EXIT_IRREGULAR, EXIT_OK, add_workers_flag, build_manifest, positive_float, positive_int,
    resolve_workers,
)
from cr_regular_spheres.config import DEFAULT_HISTOGRAM_BINS, DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOL, SweepConfig
from cr_regular_spheres.storage import load_embedding, save_histogram, save_manifest, save_report
from cr_regular_spheres.structures import Verdict
from cr_regular_spheres.verifier import equivalence_check

logger = logging.getLogger(__name__)

SPOT_CHECK_STRIDE = 100  # every 100th sample, i.e. 1%


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser('verify', help='sampled CR-regularity sweep with criterion spot checks')
    parser.add_argument('embedding', type=Path, help='embedding JSON file')
    parser.add_argument('--samples', type=positive_int, default=DEFAULT_SAMPLES)
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED)
    parser.add_argument('--tol', type=positive_float, default=DEFAULT_TOL)
    parser.add_argument('--report', type=Path, default=None, help='certificate report JSON path')
    parser.add_argument('--histogram', type=Path, default=None, help='sigma_min histogram CSV path')
    parser.add_argument('--bins', type=positive_int, default=DEFAULT_HISTOGRAM_BINS)
    add_workers_flag(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    embedding = load_embedding(args.embedding)
    cfg = SweepConfig(samples=args.samples, seed=args.seed, tol=args.tol, workers=resolve_workers(args))
    result = sweep(embedding, cfg)
    report = result.report

    points = sample_points(embedding.m, cfg.samples, cfg.seed)[::SPOT_CHECK_STRIDE]
    checks = [equivalence_check(embedding, z, cfg.tol) for z in points]
    disagreements = [c for c in checks if not c.agree]
    report.extras['equivalence'] = {
        'checked': len(checks),
        'stride': SPOT_CHECK_STRIDE,
        'disagreements': [c.to_dict() for c in disagreements],
    }

    manifest = build_manifest('verify', {**cfg.echo(), 'embedding': str(args.embedding)}, {'embedding': args.embedding})
    manifest.wall_time = time.perf_counter() - started
    if args.report is not None:
        save_report(args.report, report, manifest)
    if args.histogram is not None:
        save_histogram(args.histogram, sigma_histogram(result.sigma_min, args.bins))
        save_manifest(args.histogram, manifest)

    print(f'{report.label}: {cfg.samples} samples, min sigma_min = {report.min_sigma:.12e}, verdict {report.verdict.value}')
    print(f'criterion spot checks: {len(checks)} points, {len(disagreements)} disagreements')
    if disagreements:
        logger.error('criteria disagree at %d points, first: %s', len(disagreements), disagreements[0].describe())
        return EXIT_DISAGREEMENT
    if report.verdict is not Verdict.ALL_REGULAR:
        witness = report.witness_z if report.witness_z is not None else report.argmin_z
        logger.error('%s at sample %s, z = %s', report.verdict.value, report.witness_index, list(witness))
        return EXIT_IRREGULAR
    return EXIT_OK
