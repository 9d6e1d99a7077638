from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from cr_regular_spheres.wirtinger_poly import WPolynomial


class Verdict(Enum):
    ALL_REGULAR = 'all-regular (sampled)'
    FAILURE_FOUND = 'failure-found'
    MARGINAL = 'marginal'


class ControlKind(Enum):
    HOLOMORPHIC = 'holomorphic'
    ZERO = 'zero'
    RADIAL = 'radial'


def complex_pairs(z: Sequence[complex]) -> List[List[float]]:
    return [[float(c.real), float(c.imag)] for c in np.asarray(z, dtype=complex)]


def pairs_to_complex(pairs: Sequence[Sequence[float]]) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)


@dataclass(eq=False)
class OneForm:
    """A (1,0)-form sum_j coeffs[j] dz_j."""
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.ndim != 1:
            raise ValueError(f'one-form coefficients must be a vector, got shape {self.coeffs.shape}')

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]


@dataclass(eq=False)
class TwoForm:
    """Coefficient of dz_i ^ dz_j at (i, j); always antisymmetric."""
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.ndim != 2 or self.coeffs.shape[0] != self.coeffs.shape[1]:
            raise ValueError(f'two-form coefficients must be square, got shape {self.coeffs.shape}')
        if not np.array_equal(self.coeffs, -self.coeffs.T):
            raise ValueError('two-form coefficients must be antisymmetric')

    @classmethod
    def wedge(cls, a: OneForm, b: OneForm) -> 'TwoForm':
        if a.dim != b.dim:
            raise ValueError(f'cannot wedge forms of dimensions {a.dim} and {b.dim}')
        return cls(np.outer(a.coeffs, b.coeffs) - np.outer(b.coeffs, a.coeffs))

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def scale(self, c: complex) -> 'TwoForm':
        return TwoForm(c * self.coeffs)

    def __sub__(self, other: 'TwoForm') -> 'TwoForm':
        return TwoForm(self.coeffs - other.coeffs)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs), initial=0.0))


@dataclass(frozen=True)
class IdentityCheck:
    lhs: WPolynomial
    rhs: WPolynomial
    residual: WPolynomial

    @property
    def holds(self) -> bool:
        return self.residual.is_zero()

    def __bool__(self):
        return self.holds


@dataclass(eq=False)
class IndependenceReport:
    z: np.ndarray
    sigma: np.ndarray
    rank: int
    cr_regular: bool
    threshold: float
    marginal: bool

    @property
    def sigma_min(self) -> float:
        return float(self.sigma[-1])

    @property
    def sigma_max(self) -> float:
        return float(self.sigma[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'z': complex_pairs(self.z),
            'sigma': [float(s) for s in self.sigma],
            'sigma_min': self.sigma_min,
            'sigma_max': self.sigma_max,
            'rank': self.rank,
            'threshold': self.threshold,
            'cr_regular': self.cr_regular,
            'marginal': self.marginal,
        }


@dataclass(eq=False)
class EquivalenceResult:
    z: np.ndarray
    wedge_ok: bool
    matrix_ok: bool
    cr_dim: int
    expected_cr_dim: int
    reduced_ok: bool

    @property
    def cr_dim_ok(self) -> bool:
        return self.cr_dim == self.expected_cr_dim

    @property
    def criteria(self) -> Tuple[bool, bool, bool, bool]:
        return self.wedge_ok, self.matrix_ok, self.cr_dim_ok, self.reduced_ok

    @property
    def agree(self) -> bool:
        return len(set(self.criteria)) == 1

    @property
    def passed(self) -> bool:
        return all(self.criteria)

    def __bool__(self):
        return self.agree

    def describe(self) -> str:
        return (
            f'wedge={self.wedge_ok} matrix-rank={self.matrix_ok} '
            f'cr-dim={self.cr_dim} (expected {self.expected_cr_dim}) reduced-wedge={self.reduced_ok}'
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'z': complex_pairs(self.z),
            'wedge_nonzero': self.wedge_ok,
            'matrix_full_rank': self.matrix_ok,
            'cr_dim': self.cr_dim,
            'expected_cr_dim': self.expected_cr_dim,
            'reduced_wedge_nonzero': self.reduced_ok,
            'agree': self.agree,
        }


@dataclass(eq=False)
class LocalMinimum:
    z: np.ndarray
    value: float
    start_value: float
    converged: bool
    iterations: int


@dataclass(eq=False)
class CertificateReport:
    label: str
    samples: int
    seed: int
    tol: float
    min_sigma: float
    sigma_max_at_argmin: float
    argmin_index: int
    argmin_z: np.ndarray
    verdict: Verdict
    restarts: int = 0
    objective: Optional[str] = None
    best_value: Optional[float] = None
    converged_minima: List[Tuple[np.ndarray, float]] = field(default_factory=list)
    unconverged: int = 0
    failure_count: int = 0
    marginal_count: int = 0
    witness_index: Optional[int] = None
    witness_z: Optional[np.ndarray] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'config': {'samples': self.samples, 'seed': self.seed, 'tol': self.tol, 'restarts': self.restarts},
            'objective': self.objective,
            'min_sigma': self.min_sigma,
            'sigma_max_at_argmin': self.sigma_max_at_argmin,
            'argmin_index': self.argmin_index,
            'argmin_z': complex_pairs(self.argmin_z),
            'best_value': self.best_value,
            'converged_minima': [{'z': complex_pairs(z), 'value': float(v)} for z, v in self.converged_minima],
            'unconverged': self.unconverged,
            'failure_count': self.failure_count,
            'marginal_count': self.marginal_count,
            'witness_index': self.witness_index,
            'witness_z': None if self.witness_z is None else complex_pairs(self.witness_z),
            'verdict': self.verdict.value,
            'extras': self.extras,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CertificateReport':
        config = data['config']
        return cls(
            label=data['label'],
            samples=config['samples'],
            seed=config['seed'],
            tol=config['tol'],
            restarts=config['restarts'],
            objective=data['objective'],
            min_sigma=data['min_sigma'],
            sigma_max_at_argmin=data['sigma_max_at_argmin'],
            argmin_index=data['argmin_index'],
            argmin_z=pairs_to_complex(data['argmin_z']),
            best_value=data['best_value'],
            converged_minima=[(pairs_to_complex(m['z']), m['value']) for m in data['converged_minima']],
            unconverged=data['unconverged'],
            failure_count=data['failure_count'],
            marginal_count=data['marginal_count'],
            witness_index=data['witness_index'],
            witness_z=None if data['witness_z'] is None else pairs_to_complex(data['witness_z']),
            verdict=Verdict(data['verdict']),
            extras=data.get('extras', {}),
        )


@dataclass
class RunManifest:
    command: str
    config: Dict[str, Any]
    inputs: Dict[str, str]
    version: str
    wall_time: Optional[float] = None

    def to_dict(self, include_wall_time: bool = True) -> Dict[str, Any]:
        data = {'command': self.command, 'config': self.config, 'inputs': self.inputs, 'version': self.version}
        if include_wall_time:
            data['wall_time'] = self.wall_time
        return data
