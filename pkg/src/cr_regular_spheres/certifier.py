import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize, minimize_scalar

from cr_regular_spheres.catalog import GraphEmbedding, require_unit
from cr_regular_spheres.config import (
    CHUNK_SIZE, DEFAULT_HISTOGRAM_BINS, DEFAULT_PROFILE_RESOLUTION, MARGINAL_FACTOR, MinimizeOptions, SweepConfig,
)
from cr_regular_spheres.errors import ConfigError
from cr_regular_spheres.structures import CertificateReport, LocalMinimum, Verdict
from cr_regular_spheres.verifier import independence_matrices, independence_matrix, point_report, sphere_tangent_basis

logger = logging.getLogger(__name__)

SWEEP_STREAM = 0
RESTART_STREAM = 1


@dataclass(eq=False)
class SweepResult:
    report: CertificateReport
    sigma_min: np.ndarray
    sigma_max: np.ndarray


def sample_chunk(m: int, seed: int, chunk_index: int, size: int, stream: int = SWEEP_STREAM) -> np.ndarray:
    """Uniform points on S^{2m-1}; each (seed, stream, chunk_index) owns a disjoint Philox counter range."""
    bit_generator = np.random.Philox(key=seed, counter=np.array([0, 0, chunk_index, stream], dtype=np.uint64))
    x = np.random.Generator(bit_generator).standard_normal((size, 2 * m))
    z = x[:, :m] + 1j * x[:, m:]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def chunk_plan(count: int, chunk_size: int = CHUNK_SIZE) -> List[Tuple[int, int]]:
    if count < 1:
        raise ConfigError(f'sample count must be >= 1, got {count}')
    return [(k, min(chunk_size, count - k * chunk_size)) for k in range((count + chunk_size - 1) // chunk_size)]


def sample_points(m: int, count: int, seed: int, stream: int = SWEEP_STREAM) -> np.ndarray:
    return np.concatenate([sample_chunk(m, seed, k, size, stream) for k, size in chunk_plan(count)])


def sample_sphere(m: int, count: int, seed: int, stream: int = SWEEP_STREAM) -> Iterator[np.ndarray]:
    for k, size in chunk_plan(count):
        yield from sample_chunk(m, seed, k, size, stream)


def _sample_at(m: int, seed: int, index: int, stream: int = SWEEP_STREAM) -> np.ndarray:
    k, pos = divmod(index, CHUNK_SIZE)
    return sample_chunk(m, seed, k, pos + 1, stream)[pos]


def _map_ordered(func: Callable, tasks: Sequence, workers: int) -> list:
    if workers == 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(func, tasks))


def _sweep_chunk(task) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    embedding, seed, chunk_index, size, tol = task
    points = sample_chunk(embedding.m, seed, chunk_index, size)
    sigma = np.linalg.svd(independence_matrices(embedding, points), compute_uv=False)
    regular = np.count_nonzero(sigma > tol * sigma[:, :1], axis=1) == embedding.q + 1
    logger.debug('chunk %d: %d points, min sigma %.3e', chunk_index, size, sigma[:, -1].min())
    return sigma[:, -1], sigma[:, 0], regular


def sweep_verdict(failures: int, marginals: int) -> Verdict:
    if failures:
        return Verdict.FAILURE_FOUND
    if marginals:
        return Verdict.MARGINAL
    return Verdict.ALL_REGULAR


def sweep(embedding: GraphEmbedding, cfg: SweepConfig) -> SweepResult:
    started = time.perf_counter()
    tasks = [(embedding, cfg.seed, k, size, cfg.tol) for k, size in chunk_plan(cfg.samples)]
    parts = _map_ordered(_sweep_chunk, tasks, cfg.workers)
    sigma_min = np.concatenate([p[0] for p in parts])
    sigma_max = np.concatenate([p[1] for p in parts])
    regular = np.concatenate([p[2] for p in parts])

    # first index among equal minima, so the reduction is keyed by (sigma_min, index)
    argmin = int(np.argmin(sigma_min))
    threshold = cfg.tol * sigma_max
    marginal = (sigma_min >= threshold / MARGINAL_FACTOR) & (sigma_min <= threshold * MARGINAL_FACTOR)
    # any failing sample makes the verdict failure-found, even when the argmin itself
    # clears its own threshold because sigma_max is smaller there
    failures = np.flatnonzero(~regular)
    marginals = int(np.count_nonzero(marginal & regular))
    witness = int(failures[0]) if failures.size else None

    report = CertificateReport(
        label=embedding.label,
        samples=cfg.samples,
        seed=cfg.seed,
        tol=cfg.tol,
        min_sigma=float(sigma_min[argmin]),
        sigma_max_at_argmin=float(sigma_max[argmin]),
        argmin_index=argmin,
        argmin_z=_sample_at(embedding.m, cfg.seed, argmin),
        verdict=sweep_verdict(failures.size, marginals),
        failure_count=int(failures.size),
        marginal_count=marginals,
        witness_index=witness,
        witness_z=None if witness is None else _sample_at(embedding.m, cfg.seed, witness),
    )
    logger.info(
        'swept %s: %d samples in %.2fs, min sigma %.6e, verdict %s',
        embedding.label, cfg.samples, time.perf_counter() - started, report.min_sigma, report.verdict.value,
    )
    return SweepResult(report=report, sigma_min=sigma_min, sigma_max=sigma_max)


def sigma_min_sq(embedding: GraphEmbedding, z: np.ndarray) -> float:
    sigma = np.linalg.svd(independence_matrix(embedding, z), compute_uv=False)
    return float(sigma[-1] ** 2)


def det_surrogate(embedding: GraphEmbedding, z: np.ndarray) -> float:
    """|det M(z)|^2, only defined for the square case q + 1 = m."""
    if embedding.q + 1 != embedding.m:
        raise ConfigError(f'det surrogate needs q + 1 = m, got q = {embedding.q}, m = {embedding.m}')
    return float(abs(np.linalg.det(independence_matrix(embedding, z))) ** 2)


OBJECTIVE_FUNCTIONS = {'sigma_min_sq': sigma_min_sq, 'det_sq': det_surrogate}


def local_minimize(embedding: GraphEmbedding, z0: Sequence[complex], opts: MinimizeOptions) -> LocalMinimum:
    """Nelder-Mead on h(z) in the chart t -> normalize(z0 + B t), B an orthonormal tangent basis at z0."""
    z0 = require_unit(z0)
    objective = OBJECTIVE_FUNCTIONS[opts.objective]
    if opts.objective == 'det_sq' and embedding.q + 1 != embedding.m:
        raise ConfigError(f'det_sq objective needs q + 1 = m, got q = {embedding.q}, m = {embedding.m}')
    m = embedding.m
    basis = sphere_tangent_basis(z0)
    tangent = basis[:m] + 1j * basis[m:]

    def chart(t: np.ndarray) -> np.ndarray:
        w = z0 + tangent @ t
        return w / np.linalg.norm(w)

    def h(t: np.ndarray) -> float:
        return objective(embedding, chart(t))

    origin = np.zeros(2 * m - 1)
    start_value = h(origin)
    simplex = np.vstack([origin, opts.initial_step * np.eye(2 * m - 1)])
    result = minimize(h, origin, method='Nelder-Mead', options={
        'maxiter': opts.max_iter,
        'xatol': opts.step_tol,
        'fatol': opts.value_tol,
        'initial_simplex': simplex,
    })
    z_star, value = chart(result.x), float(result.fun)
    if value > start_value:
        z_star, value = chart(origin), start_value
    converged = bool(result.success)
    if not converged:
        logger.warning('restart did not converge after %d iterations (best %.6e)', result.nit, value)
    return LocalMinimum(z=z_star, value=value, start_value=start_value, converged=converged, iterations=int(result.nit))


def _minimize_task(task) -> LocalMinimum:
    embedding, z0, opts = task
    return local_minimize(embedding, z0, opts)


def multistart_minimize(
    embedding: GraphEmbedding,
    restarts: int,
    seed: int,
    opts: Optional[MinimizeOptions] = None,
    starts: Optional[Sequence[Sequence[complex]]] = None,
) -> CertificateReport:
    if restarts < 1:
        raise ConfigError(f'restarts must be >= 1, got {restarts}')
    opts = opts or MinimizeOptions()
    started = time.perf_counter()
    points = [np.asarray(z, dtype=complex) for z in (starts or [])]
    if opts.coarse_samples:
        coarse = sweep(embedding, SweepConfig(samples=opts.coarse_samples, seed=seed, tol=opts.tol, workers=opts.workers))
        points.append(coarse.report.argmin_z)
    points.extend(sample_points(embedding.m, restarts, seed, stream=RESTART_STREAM))

    minima = _map_ordered(_minimize_task, [(embedding, z, opts) for z in points], opts.workers)
    best_index = min(range(len(minima)), key=lambda i: (minima[i].value, i))
    best = minima[best_index]
    final = point_report(embedding, best.z, opts.tol)
    if not final.cr_regular:
        verdict = Verdict.FAILURE_FOUND
    elif final.marginal:
        verdict = Verdict.MARGINAL
    else:
        verdict = Verdict.ALL_REGULAR
    unconverged = sum(not r.converged for r in minima)
    logger.info(
        'minimized %s from %d starts in %.2fs: best %s = %.12e (%d unconverged)',
        embedding.label, len(minima), time.perf_counter() - started, opts.objective, best.value, unconverged,
    )
    return CertificateReport(
        label=embedding.label,
        samples=opts.coarse_samples,
        seed=seed,
        tol=opts.tol,
        min_sigma=final.sigma_min,
        sigma_max_at_argmin=final.sigma_max,
        argmin_index=best_index,
        argmin_z=best.z,
        verdict=verdict,
        restarts=restarts,
        objective=opts.objective,
        best_value=best.value,
        converged_minima=[(r.z, r.value) for r in minima if r.converged],
        unconverged=unconverged,
        failure_count=int(not final.cr_regular),
        marginal_count=int(final.marginal),
        witness_index=None if final.cr_regular else best_index,
        witness_z=None if final.cr_regular else best.z,
        extras={'starts': len(minima)},
    )


def ar_profile_value(t):
    """|g|^2 on the sphere as a function of t = |z1|^2, where g = z2 dP/dzbar1 - z1 dP/dzbar2."""
    return (1 - t) ** 2 * (1 - 3 * t) ** 2 + t ** 2 * (3 * t - 2) ** 2


def profile_ar(resolution: int = DEFAULT_PROFILE_RESOLUTION) -> Tuple[float, float]:
    if resolution < 1000:
        raise ConfigError(f'resolution must be >= 1000, got {resolution}')
    t = np.linspace(0.0, 1.0, resolution + 1)
    values = ar_profile_value(t)
    k = int(np.argmin(values))
    best_t, best_value = float(t[k]), float(values[k])
    lo, hi = t[max(k - 1, 0)], t[min(k + 1, resolution)]
    polished = minimize_scalar(ar_profile_value, bounds=(lo, hi), method='bounded', options={'xatol': 1e-12})
    if polished.fun < best_value:
        best_t, best_value = float(polished.x), float(polished.fun)
    return best_t, best_value


def sigma_histogram(values: np.ndarray, bins: int = DEFAULT_HISTOGRAM_BINS) -> pd.DataFrame:
    counts, edges = np.histogram(np.asarray(values, dtype=float), bins=bins)
    return pd.DataFrame({'bin_left': edges[:-1], 'bin_right': edges[1:], 'count': counts})
