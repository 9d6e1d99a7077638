"""
Pointwise CR-regularity criteria for graph embeddings of S^{2m-1}.

Four independent routes decide whether F(z) = (z, f(z)) is CR regular at z:

* the independence matrix with rows z and df_j/dzbar(z) has full rank q + 1;
* the (1,0)-differentials of the 2q + 1 real defining functions are independent;
* the reduced forms conj(z).dz and conj(df_j/dzbar).dz are independent;
* the complex tangent of dF(T_z S^{2m-1}), computed in real coordinates, has
  dimension m - q - 1.
"""
import logging
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from cr_regular_spheres.catalog import GraphEmbedding, eval_embedding, require_unit
from cr_regular_spheres.config import DEFAULT_TOL, MARGINAL_FACTOR
from cr_regular_spheres.errors import (
    CriterionDisagreement, DimensionError, EmbeddingError, NonRealFunctionError, RankToleranceError,
)
from cr_regular_spheres.structures import EquivalenceResult, IndependenceReport, OneForm, TwoForm
from cr_regular_spheres.wirtinger_poly import (
    MultiDegree, WPolynomial, d_z, d_zbar, embed, eval_batch, is_real, real_imag_parts,
)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=128)
def zbar_jacobian(embedding: GraphEmbedding) -> Tuple[Tuple[WPolynomial, ...], ...]:
    return tuple(tuple(d_zbar(fj, k) for k in range(1, embedding.m + 1)) for fj in embedding.f)


@lru_cache(maxsize=128)
def z_jacobian(embedding: GraphEmbedding) -> Tuple[Tuple[WPolynomial, ...], ...]:
    return tuple(tuple(d_z(fj, k) for k in range(1, embedding.m + 1)) for fj in embedding.f)


def _eval_jacobian(jacobian, z: np.ndarray) -> np.ndarray:
    return np.array([[p.eval(z) for p in row] for row in jacobian], dtype=complex).reshape(len(jacobian), len(z))


def _check_point(embedding: GraphEmbedding, z: Sequence[complex]) -> np.ndarray:
    z = require_unit(z)
    if z.shape[0] != embedding.m:
        raise EmbeddingError(f'expected a point of C^{embedding.m}, got {z.shape[0]} coordinates')
    return z


def independence_matrix(embedding: GraphEmbedding, z: Sequence[complex]) -> np.ndarray:
    z = _check_point(embedding, z)
    return np.vstack([z[np.newaxis, :], _eval_jacobian(zbar_jacobian(embedding), z)])


def independence_matrices(embedding: GraphEmbedding, points: np.ndarray) -> np.ndarray:
    """Batched independence matrices, shape ``(N, q + 1, m)``; rows of ``points`` must be unit vectors."""
    points = np.asarray(points, dtype=complex)
    matrices = np.empty((points.shape[0], embedding.q + 1, embedding.m), dtype=complex)
    matrices[:, 0, :] = points
    for j, row in enumerate(zbar_jacobian(embedding), start=1):
        for k, p in enumerate(row):
            matrices[:, j, k] = eval_batch(p, points)
    return matrices


def numerical_rank(matrix: np.ndarray, tol: float = DEFAULT_TOL) -> Tuple[int, np.ndarray]:
    """Rank under the rule sigma_i > tol * sigma_max, with the singular values in descending order."""
    sigma = np.linalg.svd(np.asarray(matrix), compute_uv=False)
    if sigma.size == 0:
        return 0, sigma
    return int(np.count_nonzero(sigma > tol * sigma[0])), sigma


def is_marginal(sigma_min: float, threshold: float) -> bool:
    return threshold / MARGINAL_FACTOR <= sigma_min <= threshold * MARGINAL_FACTOR


def point_report(embedding: GraphEmbedding, z: Sequence[complex], tol: float = DEFAULT_TOL) -> IndependenceReport:
    if not tol > 0:
        raise ValueError(f'tol must be positive, got {tol}')
    matrix = independence_matrix(embedding, z)
    rank, sigma = numerical_rank(matrix, tol)
    threshold = tol * float(sigma[0])
    return IndependenceReport(
        z=np.asarray(z, dtype=complex),
        sigma=sigma,
        rank=rank,
        cr_regular=rank == embedding.q + 1,
        threshold=threshold,
        marginal=is_marginal(float(sigma[-1]), threshold),
    )


@lru_cache(maxsize=128)
def defining_functions(embedding: GraphEmbedding) -> Tuple[WPolynomial, ...]:
    """rho_1 = -1 + |z|^2 and z_{m+j} - f_j = rho_{2j} + i rho_{2j+1}, over m + q variables."""
    m, total = embedding.m, embedding.m + embedding.q
    rho_1 = WPolynomial(total, [(MultiDegree(_unit(total, k), _unit(total, k)), 1) for k in range(1, m + 1)]) - 1
    rhos = [rho_1]
    for j, fj in enumerate(embedding.f, start=1):
        g = WPolynomial.variable(total, m + j) - embed(fj, total)
        rhos.extend(real_imag_parts(g))
    return tuple(rhos)


def _unit(m: int, j: int) -> Tuple[int, ...]:
    return tuple(1 if k == j else 0 for k in range(1, m + 1))


def del_form(rho: WPolynomial, w: Sequence[complex]) -> OneForm:
    if not is_real(rho):
        raise NonRealFunctionError(f'expected a real-valued polynomial, got {rho}')
    w = np.asarray(w, dtype=complex)
    if w.shape != (rho.m,):
        raise DimensionError(f'expected a point with {rho.m} coordinates, got shape {w.shape}')
    return OneForm([d_z(rho, j).eval(w) for j in range(1, rho.m + 1)])


def wedge_nonzero(forms: Sequence[OneForm], tol: float = DEFAULT_TOL) -> bool:
    """A wedge of 1-forms is nonzero iff the forms are linearly independent."""
    dims = {form.dim for form in forms}
    if len(dims) != 1:
        raise DimensionError(f'forms must share a dimension, got {sorted(dims)}')
    if len(forms) > dims.pop():
        raise DimensionError(f'cannot wedge {len(forms)} forms in fewer dimensions')
    rank, _ = numerical_rank(np.vstack([form.coeffs for form in forms]), tol)
    return rank == len(forms)


def _dbar_conj_form(f: WPolynomial, w: np.ndarray) -> OneForm:
    # conj of dbar f as a (1,0)-form: coefficients conj(df/dzbar_j)
    return OneForm(np.conj([d_zbar(f, j).eval(w) for j in range(1, f.m + 1)]))


def lemma_two_form_check(f: WPolynomial, w: Sequence[complex]) -> float:
    """Max-entry modulus of du ^ dv - (i/2) df ^ conj(dbar f) for u + iv = f."""
    w = np.asarray(w, dtype=complex)
    u, v = real_imag_parts(f)
    lhs = TwoForm.wedge(del_form(u, w), del_form(v, w))
    df = OneForm([d_z(f, j).eval(w) for j in range(1, f.m + 1)])
    rhs = TwoForm.wedge(df, _dbar_conj_form(f, w)).scale(0.5j)
    return (lhs - rhs).max_abs()


def pair_form_check(embedding: GraphEmbedding, j: int, z: Sequence[complex]) -> float:
    """Residual of d rho_{2j} ^ d rho_{2j+1} = (i/2) conj(dbar f_j) ^ (dz_{m+j} - df_j) at the graph point over z."""
    if not 1 <= j <= embedding.q:
        raise DimensionError(f'graph function index {j} out of range 1..{embedding.q}')
    w = eval_embedding(embedding, z)
    z = w[:embedding.m]
    rhos = defining_functions(embedding)
    lhs = TwoForm.wedge(del_form(rhos[2 * j - 1], w), del_form(rhos[2 * j], w))
    pad = np.zeros(embedding.q, dtype=complex)
    fj = embedding.f[j - 1]
    a = OneForm(np.concatenate([_dbar_conj_form(fj, z).coeffs, pad]))
    b_coeffs = np.concatenate([-np.array([p.eval(z) for p in z_jacobian(embedding)[j - 1]]), pad])
    b_coeffs[embedding.m + j - 1] += 1
    rhs = TwoForm.wedge(a, OneForm(b_coeffs)).scale(0.5j)
    return (lhs - rhs).max_abs()


def reduced_forms(embedding: GraphEmbedding, z: Sequence[complex]) -> List[OneForm]:
    z = _check_point(embedding, z)
    return [OneForm(np.conj(z))] + [_dbar_conj_form(fj, z) for fj in embedding.f]


def sphere_tangent_basis(z: Sequence[complex]) -> np.ndarray:
    """Real orthonormal basis, shape ``(2m, 2m - 1)``, of {w : Re<z, w> = 0} in (Re w, Im w) coordinates."""
    z = np.asarray(z, dtype=complex)
    m = z.shape[0]
    radial = np.concatenate([z.real, z.imag])
    # orthonormalising [radial | e_1 .. e_2m] leaves the radial direction first
    q, _ = np.linalg.qr(np.column_stack([radial, np.eye(2 * m)]))
    return q[:, 1:2 * m]


def _realify(vectors: np.ndarray) -> np.ndarray:
    return np.vstack([vectors.real, vectors.imag])


def cr_dim_at(embedding: GraphEmbedding, z: Sequence[complex], tol: float = DEFAULT_TOL) -> int:
    """dim_C of dF(T_z) intersected with J dF(T_z), straight from the tangent-space definition."""
    z = _check_point(embedding, z)
    m = embedding.m
    basis = sphere_tangent_basis(z)
    tangent = basis[:m] + 1j * basis[m:]
    holo = _eval_jacobian(z_jacobian(embedding), z)
    anti = _eval_jacobian(zbar_jacobian(embedding), z)
    pushed = np.vstack([tangent, holo @ tangent + anti @ np.conj(tangent)])
    t_real, jt_real = _realify(pushed), _realify(1j * pushed)

    dim_t, _ = numerical_rank(t_real, tol)
    dim_jt, _ = numerical_rank(jt_real, tol)
    if dim_t != 2 * m - 1 or dim_jt != 2 * m - 1:
        raise RankToleranceError(f'pushed-forward tangent space has rank {dim_t}, expected {2 * m - 1}')
    rank_sum, sigma = numerical_rank(np.hstack([t_real, jt_real]), tol)
    excess = dim_t + dim_jt - rank_sum
    if excess % 2:
        gap = float(sigma[rank_sum - 1] - sigma[rank_sum]) if rank_sum < sigma.size else None
        raise RankToleranceError(f'T + JT has rank {rank_sum}, odd excess {excess} over a complex subspace', gap)
    return excess // 2


def equivalence_check(embedding: GraphEmbedding, z: Sequence[complex], tol: float = DEFAULT_TOL) -> EquivalenceResult:
    z = _check_point(embedding, z)
    w = eval_embedding(embedding, z)
    forms = [del_form(rho, w) for rho in defining_functions(embedding)]
    result = EquivalenceResult(
        z=z,
        wedge_ok=wedge_nonzero(forms, tol),
        matrix_ok=point_report(embedding, z, tol).cr_regular,
        cr_dim=cr_dim_at(embedding, z, tol),
        expected_cr_dim=embedding.expected_cr_dim,
        reduced_ok=wedge_nonzero(reduced_forms(embedding, z), tol),
    )
    if not result.agree:
        logger.error('criterion disagreement for %s: %s', embedding.label, result.describe())
    return result


def require_equivalence(embedding: GraphEmbedding, z: Sequence[complex], tol: float = DEFAULT_TOL) -> EquivalenceResult:
    result = equivalence_check(embedding, z, tol)
    if not result.agree:
        raise CriterionDisagreement(result)
    return result
