"""
Explicit graph embeddings z -> (z, f_1(z), ..., f_q(z)) of odd spheres.

The catalog holds the quartic P of the S^3 -> C^3 totally real embedding, its block
sums Q on S^{4n-1}, and negative controls that fail the independence criterion
everywhere.
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Union

import numpy as np

from cr_regular_spheres.config import SPHERE_TOL
from cr_regular_spheres.errors import EmbeddingError, OffSphereError, SerializationError
from cr_regular_spheres.structures import ControlKind, IdentityCheck
from cr_regular_spheres.wirtinger_poly import (
    I, MultiDegree, WPolynomial, d_zbar, embed, poly_from_dict, poly_to_dict, substitute_zero,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphEmbedding:
    m: int
    f: tuple
    label: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'f', tuple(self.f))
        if not 1 <= len(self.f) <= self.m - 1:
            raise EmbeddingError(f'need 1 <= q <= m - 1 = {self.m - 1} graph functions, got q = {len(self.f)}')
        for j, fj in enumerate(self.f, start=1):
            if not isinstance(fj, WPolynomial) or fj.m != self.m:
                raise EmbeddingError(f'graph function f_{j} must be a polynomial in {self.m} variables')

    @property
    def q(self) -> int:
        return len(self.f)

    @property
    def expected_cr_dim(self) -> int:
        return self.m - self.q - 1


def require_unit(z: Sequence[complex], tol: float = SPHERE_TOL) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.ndim != 1:
        raise ValueError(f'expected a complex vector, got shape {z.shape}')
    distance = abs(float(np.linalg.norm(z)) - 1.0)
    if distance > tol:
        raise OffSphereError(distance, tol)
    return z


def make_P() -> WPolynomial:
    # z2 * conj(z1) * conj(z2)^2 + i * z1 * conj(z1)^2 * conj(z2)
    return WPolynomial(2, [
        (MultiDegree((0, 1), (1, 2)), 1),
        (MultiDegree((1, 0), (2, 1)), I),
    ])


def block_sum(p: WPolynomial, n: int) -> WPolynomial:
    if p.m != 2:
        raise EmbeddingError(f'block sums need a 2-variable polynomial, got {p.m} variables')
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise EmbeddingError(f'block count must be a positive integer, got {n!r}')
    total = WPolynomial.zero(2 * n)
    for k in range(n):
        total = total + embed(p, 2 * n, offset=2 * k)
    return total


def make_Q(n: int) -> WPolynomial:
    return block_sum(make_P(), n)


def block_support(p: WPolynomial) -> List[FrozenSet[int]]:
    """For every term, the 1-based blocks {2k-1, 2k} its variables fall into."""
    return [frozenset((j + 1) // 2 for j in degree.variables()) for degree, _ in p.terms]


def restrict_to_block(p: WPolynomial, k: int) -> WPolynomial:
    if p.m % 2 or not 1 <= k <= p.m // 2:
        raise EmbeddingError(f'block {k} does not exist in {p.m} variables')
    outside = [j for j in range(1, p.m + 1) if (j + 1) // 2 != k]
    kept = substitute_zero(p, outside) if outside else p
    lo = 2 * (k - 1)
    return WPolynomial(2, [(MultiDegree(d.alpha[lo:lo + 2], d.beta[lo:lo + 2]), c) for d, c in kept.terms])


def make_graph_embedding(m: int, fs: Sequence[WPolynomial], label: str = '') -> GraphEmbedding:
    return GraphEmbedding(m=m, f=tuple(fs), label=label)


def eval_embedding(embedding: GraphEmbedding, z: Sequence[complex]) -> np.ndarray:
    z = require_unit(z)
    if z.shape[0] != embedding.m:
        raise EmbeddingError(f'expected a point of C^{embedding.m}, got {z.shape[0]} coordinates')
    return np.concatenate([z, [fj.eval(z) for fj in embedding.f]])


def ar_identity_rhs() -> WPolynomial:
    """|z2|^2 (|z2|^2 - 2|z1|^2) - i |z1|^2 (|z1|^2 - 2|z2|^2) with |z_k|^2 = z_k conj(z_k)."""
    a = WPolynomial.monomial((1, 0), (1, 0))
    b = WPolynomial.monomial((0, 1), (0, 1))
    return b * (b - 2 * a) - (a * (a - 2 * b)).scale(I)


def verify_ar_identity(perturbation: Optional[WPolynomial] = None) -> IdentityCheck:
    P = make_P()
    z1, z2 = WPolynomial.variable(2, 1), WPolynomial.variable(2, 2)
    lhs = z2 * d_zbar(P, 1) - z1 * d_zbar(P, 2)
    if perturbation is not None:
        lhs = lhs + perturbation
    rhs = ar_identity_rhs()
    check = IdentityCheck(lhs=lhs, rhs=rhs, residual=lhs - rhs)
    logger.debug('AR identity: lhs has %d terms, residual has %d terms', len(lhs), len(check.residual))
    return check


def make_negative_control(kind: Union[ControlKind, str], m: int) -> GraphEmbedding:
    try:
        kind = ControlKind(kind)
    except ValueError:
        raise EmbeddingError(f'unknown control kind {kind!r}, expected one of {[k.value for k in ControlKind]}') from None
    if m < 2:
        raise EmbeddingError(f'negative controls need m >= 2, got {m}')
    if kind is ControlKind.HOLOMORPHIC:
        f = WPolynomial.monomial(_unit(m, 1, 2), (0,) * m)
    elif kind is ControlKind.ZERO:
        f = WPolynomial.zero(m)
    else:
        f = WPolynomial(m, [(MultiDegree(_unit(m, k), _unit(m, k)), 1) for k in range(1, m + 1)])
    return make_graph_embedding(m, [f], label=f'control:{kind.value}:m={m}')


def _unit(m: int, j: int, power: int = 1):
    return tuple(power if k == j else 0 for k in range(1, m + 1))


def corollary_embedding(m: int) -> GraphEmbedding:
    """CR regular S^{2m-1} -> C^{m+1}; exists exactly when m is even."""
    if m < 2:
        raise EmbeddingError(f'the corollary concerns m > 1, got {m}')
    if m % 2:
        raise EmbeddingError(f'S^{2 * m - 1} admits no CR regular embedding in C^{m + 1} for odd m = {m}')
    return make_graph_embedding(m, [make_Q(m // 2)], label=f'corollary:m={m}')


def _ar() -> GraphEmbedding:
    return make_graph_embedding(2, [make_P()], label='ahern-rudin')


def _q_block(n: int) -> GraphEmbedding:
    Q = make_Q(n)
    return make_graph_embedding(2 * n, [Q], label=f'q-block:n={n}')


PRESETS: Dict[str, Callable[..., GraphEmbedding]] = {
    'ar': _ar,
    'q-block': _q_block,
    'corollary': corollary_embedding,
    'holomorphic': lambda m=2: make_negative_control(ControlKind.HOLOMORPHIC, m),
    'zero': lambda m=2: make_negative_control(ControlKind.ZERO, m),
    'radial': lambda m=2: make_negative_control(ControlKind.RADIAL, m),
}

PRESET_PARAMS = {'ar': (), 'q-block': ('n',), 'corollary': ('m',), 'holomorphic': ('m',), 'zero': ('m',), 'radial': ('m',)}


def make_preset(name: str, **params: Any) -> GraphEmbedding:
    if name not in PRESETS:
        raise EmbeddingError(f'unknown preset {name!r}, expected one of {sorted(PRESETS)}')
    accepted = PRESET_PARAMS[name]
    given = {key: value for key, value in params.items() if value is not None}
    unexpected = set(given) - set(accepted)
    if unexpected:
        raise EmbeddingError(f'preset {name!r} does not take {sorted(unexpected)}')
    if name in ('q-block', 'corollary') and not given:
        raise EmbeddingError(f'preset {name!r} needs --{accepted[0]}')
    return PRESETS[name](**given)


def embedding_to_dict(embedding: GraphEmbedding) -> Dict[str, Any]:
    return {
        'm': embedding.m,
        'q': embedding.q,
        'label': embedding.label,
        'f': [poly_to_dict(fj) for fj in embedding.f],
    }


def embedding_from_dict(data: Mapping[str, Any]) -> GraphEmbedding:
    try:
        m, q, label = data['m'], data['q'], data['label']
        fs = [poly_from_dict(fj) for fj in data['f']]
    except (KeyError, TypeError) as e:
        raise SerializationError(f'malformed embedding document: {e!r}') from e
    for key, value in (('m', m), ('q', q)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise SerializationError(f'{key} must be an integer, got {value!r}')
    if q != len(fs):
        raise SerializationError(f'q = {q} but {len(fs)} graph functions were given')
    try:
        return make_graph_embedding(m, fs, label=label)
    except EmbeddingError as e:
        raise SerializationError(f'invalid embedding document: {e}') from e
