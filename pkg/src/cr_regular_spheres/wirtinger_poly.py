"""
Exact sparse polynomials in z_1..z_m and their conjugates.

A term is ``c * z^alpha * conj(z)^beta`` with a Gaussian-rational coefficient ``c``.
The variables z_j and conj(z_j) are treated as independent, so the Wirtinger
derivatives are plain formal partial derivatives. Floating point arithmetic only
enters through evaluation.
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, Mapping, Sequence, Tuple, Union

import numpy as np

from cr_regular_spheres.config import DEFAULT_FD_STEP
from cr_regular_spheres.errors import DimensionError, SerializationError

RATIONAL_RE = re.compile(r'^[+-]?\d+(/\d+)?$')


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 're', Fraction(self.re))
        object.__setattr__(self, 'im', Fraction(self.im))

    @staticmethod
    def coerce(value: Any) -> 'GaussianRational':
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        raise TypeError(f'cannot use {type(value).__name__} as an exact Gaussian rational')

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        norm = other.re ** 2 + other.im ** 2
        if norm == 0:
            raise ZeroDivisionError('division by the zero Gaussian rational')
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> 'GaussianRational':
        return GaussianRational(self.re, -self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return 'i' if self.im == 1 else f'{self.im}i'
        sign = '+' if self.im > 0 else '-'
        return f'{self.re}{sign}{abs(self.im)}i'


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


@dataclass(frozen=True)
class MultiDegree:
    alpha: Tuple[int, ...]
    beta: Tuple[int, ...]

    def __post_init__(self):
        alpha, beta = tuple(int(a) for a in self.alpha), tuple(int(b) for b in self.beta)
        if len(alpha) != len(beta) or not alpha:
            raise DimensionError(f'alpha and beta must share a length m >= 1, got {len(alpha)} and {len(beta)}')
        if min(alpha + beta) < 0:
            raise ValueError(f'exponents must be non-negative, got {alpha}, {beta}')
        object.__setattr__(self, 'alpha', alpha)
        object.__setattr__(self, 'beta', beta)

    @property
    def m(self) -> int:
        return len(self.alpha)

    @property
    def degree(self) -> int:
        return sum(self.alpha) + sum(self.beta)

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return self.degree, self.alpha + self.beta

    def __add__(self, other: 'MultiDegree') -> 'MultiDegree':
        return MultiDegree(
            tuple(a + b for a, b in zip(self.alpha, other.alpha)),
            tuple(a + b for a, b in zip(self.beta, other.beta)),
        )

    def conjugate(self) -> 'MultiDegree':
        return MultiDegree(self.beta, self.alpha)

    def variables(self) -> Tuple[int, ...]:
        """1-based indices j with z_j or conj(z_j) present."""
        return tuple(j + 1 for j in range(self.m) if self.alpha[j] or self.beta[j])


Terms = Union[Mapping[MultiDegree, Any], Iterable[Tuple[MultiDegree, Any]]]


@dataclass(frozen=True)
class WPolynomial:
    """Canonical form: no zero coefficients, terms sorted by ``MultiDegree.sort_key``."""
    m: int
    terms: Tuple[Tuple[MultiDegree, GaussianRational], ...] = ()

    def __post_init__(self):
        if self.m < 1:
            raise DimensionError(f'variable count must be >= 1, got {self.m}')
        items = self.terms.items() if isinstance(self.terms, Mapping) else self.terms
        merged: Dict[MultiDegree, GaussianRational] = {}
        for degree, coeff in items:
            if degree.m != self.m:
                raise DimensionError(f'term {degree} has {degree.m} variables, polynomial has {self.m}')
            merged[degree] = merged.get(degree, ZERO) + GaussianRational.coerce(coeff)
        canonical = tuple(sorted(((d, c) for d, c in merged.items() if c), key=lambda t: t[0].sort_key))
        object.__setattr__(self, 'terms', canonical)

    @classmethod
    def zero(cls, m: int) -> 'WPolynomial':
        return cls(m)

    @classmethod
    def constant(cls, m: int, c: Any) -> 'WPolynomial':
        return cls(m, [(MultiDegree((0,) * m, (0,) * m), c)])

    @classmethod
    def monomial(cls, alpha: Sequence[int], beta: Sequence[int], c: Any = 1) -> 'WPolynomial':
        degree = MultiDegree(tuple(alpha), tuple(beta))
        return cls(degree.m, [(degree, c)])

    @classmethod
    def from_terms(cls, m: int, terms: Iterable[Tuple[Sequence[int], Sequence[int], Any]]) -> 'WPolynomial':
        """Build from ``(alpha, beta, coeff)`` triples; repeated multidegrees are summed."""
        return cls(m, [(MultiDegree(tuple(alpha), tuple(beta)), c) for alpha, beta, c in terms])

    @classmethod
    def variable(cls, m: int, j: int) -> 'WPolynomial':
        _check_index(m, j)
        return cls.monomial(_unit(m, j), (0,) * m)

    @classmethod
    def conj_variable(cls, m: int, j: int) -> 'WPolynomial':
        _check_index(m, j)
        return cls.monomial((0,) * m, _unit(m, j))

    @property
    def coeffs(self) -> Dict[MultiDegree, GaussianRational]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return max((d.degree for d, _ in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        return poly_arith(self, _lift(self.m, other), 'add')

    def __radd__(self, other):
        return poly_arith(_lift(self.m, other), self, 'add')

    def __sub__(self, other):
        return poly_arith(self, _lift(self.m, other), 'sub')

    def __rsub__(self, other):
        return poly_arith(_lift(self.m, other), self, 'sub')

    def __mul__(self, other):
        return poly_arith(self, _lift(self.m, other), 'mul')

    def __rmul__(self, other):
        return poly_arith(_lift(self.m, other), self, 'mul')

    def __neg__(self):
        return self.scale(-ONE)

    def scale(self, c: Any) -> 'WPolynomial':
        c = GaussianRational.coerce(c)
        return WPolynomial(self.m, [(d, coeff * c) for d, coeff in self.terms])

    def eval(self, z: Sequence[complex]) -> complex:
        z = np.asarray(z, dtype=complex)
        if z.shape != (self.m,):
            raise DimensionError(f'expected a point with {self.m} coordinates, got shape {z.shape}')
        zc = np.conj(z)
        value = 0j
        for degree, coeff in self.terms:
            value += complex(coeff) * complex(np.prod(z ** np.array(degree.alpha))) * complex(np.prod(zc ** np.array(degree.beta)))
        return value

    def __str__(self):
        if not self.terms:
            return '0'
        return ' + '.join(_format_term(d, c) for d, c in self.terms)


def _unit(m: int, j: int) -> Tuple[int, ...]:
    return tuple(1 if k == j - 1 else 0 for k in range(m))


def _check_index(m: int, j: int) -> None:
    if not 1 <= j <= m:
        raise DimensionError(f'variable index {j} out of range 1..{m}')


def _lift(m: int, value: Any) -> WPolynomial:
    if isinstance(value, WPolynomial):
        return value
    return WPolynomial.constant(m, value)


def _format_term(degree: MultiDegree, coeff: GaussianRational) -> str:
    factors = []
    for name, exponents in (('z', degree.alpha), ('zb', degree.beta)):
        for j, e in enumerate(exponents, start=1):
            if e:
                factors.append(f'{name}{j}' if e == 1 else f'{name}{j}^{e}')
    return '*'.join([f'({coeff})'] + factors)


def poly_arith(a: WPolynomial, b: WPolynomial, op: str) -> WPolynomial:
    if a.m != b.m:
        raise DimensionError(f'variable counts differ: {a.m} vs {b.m}')
    if op == 'add':
        return WPolynomial(a.m, a.terms + b.terms)
    if op == 'sub':
        return WPolynomial(a.m, a.terms + tuple((d, -c) for d, c in b.terms))
    if op == 'mul':
        return WPolynomial(a.m, [(da + db, ca * cb) for da, ca in a.terms for db, cb in b.terms])
    raise ValueError(f'unknown operation {op!r}, expected add, sub or mul')


def poly_conj(p: WPolynomial) -> WPolynomial:
    return WPolynomial(p.m, [(d.conjugate(), c.conjugate()) for d, c in p.terms])


def _differentiate(p: WPolynomial, j: int, conjugate: bool) -> WPolynomial:
    _check_index(p.m, j)
    k = j - 1
    result = []
    for degree, coeff in p.terms:
        exponents = degree.beta if conjugate else degree.alpha
        e = exponents[k]
        if e == 0:
            continue
        lowered = exponents[:k] + (e - 1,) + exponents[k + 1:]
        new_degree = MultiDegree(degree.alpha, lowered) if conjugate else MultiDegree(lowered, degree.beta)
        result.append((new_degree, coeff * e))
    return WPolynomial(p.m, result)


def d_z(p: WPolynomial, j: int) -> WPolynomial:
    return _differentiate(p, j, conjugate=False)


def d_zbar(p: WPolynomial, j: int) -> WPolynomial:
    return _differentiate(p, j, conjugate=True)


def eval_batch(p: WPolynomial, points: np.ndarray) -> np.ndarray:
    """Evaluate at every row of an ``(N, m)`` array, summing terms in canonical order."""
    points = np.asarray(points, dtype=complex)
    if points.ndim != 2 or points.shape[1] != p.m:
        raise DimensionError(f'expected an (N, {p.m}) array, got shape {points.shape}')
    conj_points = np.conj(points)
    values = np.zeros(points.shape[0], dtype=complex)
    for degree, coeff in p.terms:
        values += complex(coeff) * np.prod(points ** np.array(degree.alpha), axis=1) * np.prod(conj_points ** np.array(degree.beta), axis=1)
    return values


def wirtinger_fd(
    f: Callable[[np.ndarray], complex],
    z: Sequence[complex],
    j: int,
    h: float = DEFAULT_FD_STEP,
    wrt: str = 'zbar',
) -> complex:
    if not h > 0:
        raise ValueError(f'step must be positive, got {h}')
    z = np.asarray(z, dtype=complex)
    _check_index(len(z), j)
    e = np.zeros(len(z), dtype=complex)
    e[j - 1] = h
    dx = (f(z + e) - f(z - e)) / (2 * h)
    dy = (f(z + 1j * e) - f(z - 1j * e)) / (2 * h)
    if wrt == 'zbar':
        return 0.5 * (dx + 1j * dy)
    if wrt == 'z':
        return 0.5 * (dx - 1j * dy)
    raise ValueError(f"wrt must be 'z' or 'zbar', got {wrt!r}")


def is_real(p: WPolynomial) -> bool:
    return poly_conj(p) == p


def real_imag_parts(g: WPolynomial) -> Tuple[WPolynomial, WPolynomial]:
    conj_g = poly_conj(g)
    u = (g + conj_g).scale(Fraction(1, 2))
    v = (g - conj_g).scale(GaussianRational(0, Fraction(-1, 2)))  # 1/(2i) = -i/2
    return u, v


def embed(p: WPolynomial, m_new: int, offset: int = 0) -> WPolynomial:
    """Re-index into ``m_new`` variables, sending z_j to z_{j+offset}."""
    if offset < 0 or offset + p.m > m_new:
        raise DimensionError(f'cannot place {p.m} variables at offset {offset} among {m_new}')
    pad_left, pad_right = (0,) * offset, (0,) * (m_new - p.m - offset)
    return WPolynomial(m_new, [
        (MultiDegree(pad_left + d.alpha + pad_right, pad_left + d.beta + pad_right), c) for d, c in p.terms
    ])


def substitute_zero(p: WPolynomial, indices: Iterable[int]) -> WPolynomial:
    """Set the listed (1-based) variables and their conjugates to zero."""
    indices = set(indices)
    for j in indices:
        _check_index(p.m, j)
    return WPolynomial(p.m, [(d, c) for d, c in p.terms if not indices.intersection(d.variables())])


def _format_fraction(x: Fraction) -> str:
    return f'{x.numerator}/{x.denominator}'


def _parse_fraction(text: Any) -> Fraction:
    if not isinstance(text, str) or not RATIONAL_RE.match(text):
        raise SerializationError(f'expected a fraction string like "p/q", got {text!r}')
    try:
        return Fraction(text)
    except ZeroDivisionError as e:
        raise SerializationError(f'zero denominator in {text!r}') from e


def _parse_exponents(values: Any) -> Tuple[int, ...]:
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise SerializationError(f'exponents must be a list of integers, got {values!r}')
    return tuple(values)


def poly_to_dict(p: WPolynomial) -> Dict[str, Any]:
    return {
        'm': p.m,
        'terms': [{
            'alpha': list(d.alpha),
            'beta': list(d.beta),
            're': _format_fraction(c.re),
            'im': _format_fraction(c.im),
        } for d, c in p.terms],
    }


def poly_from_dict(data: Mapping[str, Any]) -> WPolynomial:
    try:
        m = data['m']
        terms = [(
            MultiDegree(_parse_exponents(term['alpha']), _parse_exponents(term['beta'])),
            GaussianRational(_parse_fraction(term['re']), _parse_fraction(term['im'])),
        ) for term in data['terms']]
    except SerializationError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise SerializationError(f'malformed polynomial document: {e!r}') from e
    if not isinstance(m, int) or isinstance(m, bool):
        raise SerializationError(f'm must be an integer, got {m!r}')
    try:
        return WPolynomial(m, terms)
    except ValueError as e:
        raise SerializationError(f'invalid polynomial document: {e}') from e
