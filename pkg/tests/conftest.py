from typing import Optional

import numpy as np
import pytest

from cr_regular_spheres.catalog import make_preset
from cr_regular_spheres.wirtinger_poly import I, MultiDegree, WPolynomial

UNIT_COEFFS = (1, -1, I, -I)


def random_polynomial(
    rng: np.random.Generator, m: int, n_terms: int = 5, max_exp: int = 2, max_degree: Optional[int] = None,
) -> WPolynomial:
    terms = []
    for _ in range(n_terms):
        while True:
            alpha = tuple(int(a) for a in rng.integers(0, max_exp + 1, size=m))
            beta = tuple(int(b) for b in rng.integers(0, max_exp + 1, size=m))
            if max_degree is None or sum(alpha) + sum(beta) <= max_degree:
                break
        terms.append((MultiDegree(alpha, beta), UNIT_COEFFS[int(rng.integers(len(UNIT_COEFFS)))]))
    return WPolynomial(m, terms)


def random_unit_points(rng: np.random.Generator, m: int, count: int) -> np.ndarray:
    x = rng.standard_normal((count, 2 * m))
    z = x[:, :m] + 1j * x[:, m:]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20211203)


@pytest.fixture
def ar():
    return make_preset('ar')


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    monkeypatch.setenv('CR_SPHERES_WORKERS', '1')


@pytest.fixture
def random_poly(rng):
    return lambda m, n_terms=5, max_exp=2, max_degree=None: random_polynomial(rng, m, n_terms, max_exp, max_degree)


@pytest.fixture
def unit_points(rng):
    return lambda m, count: random_unit_points(rng, m, count)
