import os
from dataclasses import dataclass, field

from cr_regular_spheres.errors import ConfigError

WORKERS_ENV_VAR = 'CR_SPHERES_WORKERS'

DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 42
DEFAULT_TOL = 1e-8
DEFAULT_RESTARTS = 64
DEFAULT_MAX_ITER = 2000
DEFAULT_STEP_TOL = 1e-10
DEFAULT_VALUE_TOL = 1e-15
DEFAULT_INITIAL_STEP = 0.1
DEFAULT_COARSE_SAMPLES = 1000
DEFAULT_FD_STEP = 1e-5
DEFAULT_PROFILE_RESOLUTION = 1_000_000
DEFAULT_HISTOGRAM_BINS = 50

SPHERE_TOL = 1e-12
MARGINAL_FACTOR = 10.0
CHUNK_SIZE = 4096  # sweep partition unit, independent of the worker count

OBJECTIVES = ('sigma_min_sq', 'det_sq')


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw is None:
        return os.cpu_count() or 1
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f'{WORKERS_ENV_VAR} must be an integer, got {raw!r}') from None
    if workers < 1:
        raise ConfigError(f'{WORKERS_ENV_VAR} must be >= 1, got {workers}')
    return workers


@dataclass(frozen=True)
class SweepConfig:
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    tol: float = DEFAULT_TOL
    workers: int = field(default_factory=default_workers)

    def __post_init__(self):
        if self.samples < 1:
            raise ConfigError(f'samples must be >= 1, got {self.samples}')
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f'seed must be a 64-bit unsigned integer, got {self.seed}')
        if not self.tol > 0:
            raise ConfigError(f'tol must be positive, got {self.tol}')
        if self.workers < 1:
            raise ConfigError(f'workers must be >= 1, got {self.workers}')

    def echo(self) -> dict:
        # workers is left out: it never changes results
        return {'samples': self.samples, 'seed': self.seed, 'tol': self.tol}


@dataclass(frozen=True)
class MinimizeOptions:
    max_iter: int = DEFAULT_MAX_ITER
    step_tol: float = DEFAULT_STEP_TOL
    value_tol: float = DEFAULT_VALUE_TOL
    initial_step: float = DEFAULT_INITIAL_STEP
    objective: str = 'sigma_min_sq'
    tol: float = DEFAULT_TOL
    coarse_samples: int = DEFAULT_COARSE_SAMPLES
    workers: int = field(default_factory=default_workers)

    def __post_init__(self):
        if self.max_iter < 1:
            raise ConfigError(f'max_iter must be >= 1, got {self.max_iter}')
        if not self.step_tol > 0 or not self.value_tol > 0 or not self.initial_step > 0:
            raise ConfigError('step_tol, value_tol and initial_step must be positive')
        if self.objective not in OBJECTIVES:
            raise ConfigError(f'unknown objective {self.objective!r}, expected one of {OBJECTIVES}')
        if not self.tol > 0:
            raise ConfigError(f'tol must be positive, got {self.tol}')
        if self.coarse_samples < 0:
            raise ConfigError(f'coarse_samples must be >= 0, got {self.coarse_samples}')
        if self.workers < 1:
            raise ConfigError(f'workers must be >= 1, got {self.workers}')

    def echo(self) -> dict:
        return {
            'max_iter': self.max_iter,
            'step_tol': self.step_tol,
            'value_tol': self.value_tol,
            'initial_step': self.initial_step,
            'objective': self.objective,
            'tol': self.tol,
            'coarse_samples': self.coarse_samples,
        }
