import numpy as np
import pytest
import sympy

from cr_regular_spheres.catalog import (
    GraphEmbedding, block_sum, block_support, corollary_embedding, embedding_from_dict, embedding_to_dict,
    eval_embedding, make_P, make_Q, make_graph_embedding, make_negative_control, make_preset, require_unit,
    restrict_to_block, verify_ar_identity,
)
from cr_regular_spheres.errors import EmbeddingError, OffSphereError, SerializationError
from cr_regular_spheres.wirtinger_poly import I, WPolynomial, d_zbar, poly_to_dict

z1, z2 = WPolynomial.variable(2, 1), WPolynomial.variable(2, 2)
zb1, zb2 = WPolynomial.conj_variable(2, 1), WPolynomial.conj_variable(2, 2)


def test_P_terms():
    assert make_P() == z2 * zb1 * zb2 * zb2 + (z1 * zb1 * zb1 * zb2).scale(I)


def test_ar_identity_holds_exactly():
    check = verify_ar_identity()
    assert check.holds
    assert check.residual.is_zero()
    expected = (z2 * z2 * zb2 * zb2
                + (z1 * z2 * zb1 * zb2).scale(-2 + 2 * I)
                + (z1 * z1 * zb1 * zb1).scale(-I))
    assert check.lhs == expected
    assert len(check.lhs) == 3


def test_ar_identity_detects_a_fault():
    fault = WPolynomial.monomial((1, 1), (1, 1), 1)
    check = verify_ar_identity(fault)
    assert not check
    assert check.residual == fault


@pytest.mark.parametrize('n', [1, 2, 3, 4])
def test_Q_block_structure(n):
    Q = make_Q(n)
    assert Q.m == 2 * n
    assert len(Q) == 2 * n
    assert all(len(blocks) == 1 for blocks in block_support(Q))
    for k in range(1, n + 1):
        assert restrict_to_block(Q, k) == make_P()


def test_make_Q_one_is_P():
    assert make_Q(1) == make_P()


@pytest.mark.parametrize('n', [0, -1])
def test_make_Q_rejects_bad_block_count(n):
    with pytest.raises(EmbeddingError):
        make_Q(n)


def test_block_sum_needs_two_variables():
    with pytest.raises(EmbeddingError):
        block_sum(WPolynomial.variable(3, 1), 2)


def test_restrict_to_block_range():
    with pytest.raises(EmbeddingError):
        restrict_to_block(make_Q(2), 3)


def test_graph_embedding_validates_q():
    with pytest.raises(EmbeddingError):
        make_graph_embedding(2, [make_P(), make_P()])
    with pytest.raises(EmbeddingError):
        make_graph_embedding(2, [])
    with pytest.raises(EmbeddingError):
        make_graph_embedding(3, [make_P()])
    E = make_graph_embedding(4, [make_Q(2)])
    assert E.q == 1
    assert E.expected_cr_dim == 2


def test_eval_embedding(ar):
    z = np.array([1, 1]) / np.sqrt(2)
    np.testing.assert_allclose(eval_embedding(ar, z), [z[0], z[1], 0.25 + 0.25j], atol=1e-15)
    with pytest.raises(OffSphereError):
        eval_embedding(ar, [1, 1])


def test_require_unit_reports_distance():
    with pytest.raises(OffSphereError) as excinfo:
        require_unit([2, 0])
    assert excinfo.value.distance == pytest.approx(1.0)


@pytest.mark.parametrize('kind', ['holomorphic', 'zero', 'radial'])
def test_negative_controls(kind):
    E = make_negative_control(kind, 3)
    assert E.m == 3 and E.q == 1
    assert E.label == f'control:{kind}:m=3'


def test_negative_control_rejects_unknown_kind():
    with pytest.raises(EmbeddingError):
        make_negative_control('antiholomorphic', 2)


def test_corollary_embedding():
    E = corollary_embedding(4)
    assert E.f == (make_Q(2),)
    with pytest.raises(EmbeddingError, match='no CR regular embedding'):
        corollary_embedding(3)


@pytest.mark.parametrize('name, params, m', [
    ('ar', {}, 2),
    ('q-block', {'n': 3}, 6),
    ('corollary', {'m': 2}, 2),
    ('radial', {'m': 4}, 4),
    ('zero', {'m': None}, 2),
])
def test_make_preset(name, params, m):
    E = make_preset(name, **params)
    assert isinstance(E, GraphEmbedding)
    assert E.m == m


@pytest.mark.parametrize('name, params', [
    ('nope', {}),
    ('ar', {'n': 2}),
    ('q-block', {}),
    ('q-block', {'n': 0}),
])
def test_make_preset_rejects(name, params):
    with pytest.raises(EmbeddingError):
        make_preset(name, **params)


def test_embedding_dict_codec():
    E = make_preset('q-block', n=2)
    data = embedding_to_dict(E)
    assert data['m'] == 4 and data['q'] == 1 and data['label'] == 'q-block:n=2'
    assert embedding_from_dict(data) == E


@pytest.mark.parametrize('mutate', [
    lambda d: d.pop('f'),
    lambda d: d.update(q=2),
    lambda d: d.update(m=1),
    lambda d: d.update(m='2'),
    lambda d: d.update(q=True),
    lambda d: d['f'][0]['terms'][0].update(re='1/0'),
    lambda d: d['f'][0]['terms'][0].update(alpha=[0, 1.7]),
])
def test_embedding_dict_codec_rejects(mutate):
    data = embedding_to_dict(make_preset('ar'))
    mutate(data)
    with pytest.raises(SerializationError):
        embedding_from_dict(data)


def _to_sympy(data, z, zb):
    expr = sympy.Integer(0)
    for term in data['terms']:
        coeff = sympy.Rational(term['re']) + sympy.I * sympy.Rational(term['im'])
        monomial = sympy.Mul(*[zk ** a for zk, a in zip(z, term['alpha'])],
                             *[zbk ** b for zbk, b in zip(zb, term['beta'])])
        expr += coeff * monomial
    return expr


def test_ar_identity_against_symbolic_expansion():
    # z and zbar as independent symbols
    z = sympy.symbols('z1 z2')
    zb = sympy.symbols('zb1 zb2')
    P = z[1] * zb[0] * zb[1] ** 2 + sympy.I * z[0] * zb[0] ** 2 * zb[1]
    dP1, dP2 = sympy.diff(P, zb[0]), sympy.diff(P, zb[1])
    lhs = sympy.expand(z[1] * dP1 - z[0] * dP2)

    assert sympy.expand(_to_sympy(poly_to_dict(make_P()), z, zb) - P) == 0
    assert sympy.expand(_to_sympy(poly_to_dict(d_zbar(make_P(), 1)), z, zb) - dP1) == 0
    assert sympy.expand(_to_sympy(poly_to_dict(d_zbar(make_P(), 2)), z, zb) - dP2) == 0

    check = verify_ar_identity()
    assert sympy.expand(_to_sympy(poly_to_dict(check.lhs), z, zb) - lhs) == 0
    expected = (z[1] ** 2 * zb[1] ** 2 + (-2 + 2 * sympy.I) * z[0] * z[1] * zb[0] * zb[1]
                - sympy.I * z[0] ** 2 * zb[0] ** 2)
    assert sympy.expand(lhs - expected) == 0
    assert len(sympy.Poly(lhs, *z, *zb).terms()) == 3
