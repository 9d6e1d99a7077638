import argparse
import logging
import time
from pathlib import Path

from cr_regular_spheres.catalog import GraphEmbedding, make_preset
from cr_regular_spheres.certifier import multistart_minimize, profile_ar
from cr_regular_spheres.commands import (
    EXIT_OK, add_workers_flag, build_manifest, positive_float, positive_int, resolve_workers,
)
from cr_regular_spheres.config import (
    DEFAULT_COARSE_SAMPLES, DEFAULT_MAX_ITER, DEFAULT_PROFILE_RESOLUTION, DEFAULT_RESTARTS, DEFAULT_SEED,
    DEFAULT_STEP_TOL, DEFAULT_TOL, OBJECTIVES, MinimizeOptions,
)
from cr_regular_spheres.storage import load_embedding, save_report

logger = logging.getLogger(__name__)


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser('minimize', help='multistart minimization of the degeneracy measure')
    parser.add_argument('embedding', type=Path, help='embedding JSON file')
    parser.add_argument('--restarts', type=positive_int, default=DEFAULT_RESTARTS)
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED)
    parser.add_argument('--tol', type=positive_float, default=DEFAULT_TOL)
    parser.add_argument('--objective', choices=OBJECTIVES, default='sigma_min_sq')
    parser.add_argument('--max-iter', type=positive_int, default=DEFAULT_MAX_ITER)
    parser.add_argument('--step-tol', type=positive_float, default=DEFAULT_STEP_TOL)
    parser.add_argument('--coarse-samples', type=int, default=DEFAULT_COARSE_SAMPLES)
    parser.add_argument('--report', type=Path, default=None, help='certificate report JSON path')
    add_workers_flag(parser)
    parser.set_defaults(handler=run)


def is_ar_embedding(embedding: GraphEmbedding) -> bool:
    ar = make_preset('ar')
    return embedding.m == ar.m and embedding.f == ar.f


def run(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    embedding = load_embedding(args.embedding)
    opts = MinimizeOptions(
        max_iter=args.max_iter,
        step_tol=args.step_tol,
        objective=args.objective,
        tol=args.tol,
        coarse_samples=args.coarse_samples,
        workers=resolve_workers(args),
    )
    report = multistart_minimize(embedding, args.restarts, args.seed, opts)
    if report.unconverged:
        logger.warning('%d of %d restarts did not converge', report.unconverged, report.extras['starts'])
    print(f'{report.label}: best {report.objective} = {report.best_value:.12e} at start {report.argmin_index}, verdict {report.verdict.value}')

    if is_ar_embedding(embedding):
        t_star, oracle = profile_ar(DEFAULT_PROFILE_RESOLUTION)
        if opts.objective == 'det_sq':
            det_value = report.best_value
        else:
            det_opts = MinimizeOptions(**{**opts.echo(), 'objective': 'det_sq', 'workers': opts.workers})
            det_value = multistart_minimize(embedding, args.restarts, args.seed, det_opts).best_value
        gap = abs(det_value - oracle)
        report.extras['profile_oracle'] = {'t': t_star, 'value': oracle, 'best_det_sq': det_value, 'gap': gap}
        print(f'profile oracle: min |det M|^2 = {oracle:.12e} at |z1|^2 = {t_star:.9f}; optimizer {det_value:.12e}, gap {gap:.3e}')

    if args.report is not None:
        manifest = build_manifest(
            'minimize',
            {**opts.echo(), 'restarts': args.restarts, 'seed': args.seed, 'embedding': str(args.embedding)},
            {'embedding': args.embedding},
        )
        manifest.wall_time = time.perf_counter() - started
        save_report(args.report, report, manifest)
    return EXIT_OK
