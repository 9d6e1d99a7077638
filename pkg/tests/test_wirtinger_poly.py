from fractions import Fraction

import numpy as np
import pytest

from cr_regular_spheres.catalog import make_P
from cr_regular_spheres.errors import DimensionError, SerializationError
from cr_regular_spheres.wirtinger_poly import (
    I, ZERO, GaussianRational, MultiDegree, WPolynomial, d_z, d_zbar, embed, eval_batch, is_real, poly_arith,
    poly_conj, poly_from_dict, poly_to_dict, real_imag_parts, substitute_zero, wirtinger_fd,
)

z1, z2 = WPolynomial.variable(2, 1), WPolynomial.variable(2, 2)
zb1, zb2 = WPolynomial.conj_variable(2, 1), WPolynomial.conj_variable(2, 2)
DIAGONAL = np.array([1, 1]) / np.sqrt(2)


def test_gaussian_rational_arithmetic():
    a = GaussianRational(Fraction(1, 2), 3)
    b = GaussianRational(-1, Fraction(1, 3))
    assert a + b == GaussianRational(Fraction(-1, 2), Fraction(10, 3))
    assert a * b == GaussianRational(Fraction(-1, 2) - 1, Fraction(1, 6) - 3)
    assert (a * b) / b == a
    assert I * I == GaussianRational(-1)
    assert not ZERO
    assert complex(a) == 0.5 + 3j
    with pytest.raises(ZeroDivisionError):
        a / ZERO
    with pytest.raises(TypeError):
        GaussianRational.coerce(0.5)


def test_add_cancellation_gives_empty_term_map():
    p = z1 + (-z1)
    assert p.is_zero()
    assert p.terms == ()
    assert p.degree == -1


def test_monomial_product():
    a = WPolynomial.monomial((1, 0), (1, 0))
    assert a * a == WPolynomial.monomial((2, 0), (2, 0))
    assert (a * a).coeffs[MultiDegree((2, 0), (2, 0))] == GaussianRational(1)


def test_arith_rejects_dimension_mismatch():
    with pytest.raises(DimensionError):
        poly_arith(z1, WPolynomial.variable(3, 1), 'add')
    with pytest.raises(ValueError):
        poly_arith(z1, z2, 'div')


def test_canonical_form_merges_and_sorts():
    p = WPolynomial.from_terms(2, [
        ((1, 0), (0, 1), 1),
        ((0, 0), (0, 0), 3),
        ((1, 0), (0, 1), -1),
        ((0, 1), (0, 0), I),
    ])
    assert [d for d, _ in p.terms] == [MultiDegree((0, 0), (0, 0)), MultiDegree((0, 1), (0, 0))]
    assert len(p) == 2


def test_addition_commutes_and_sub_round_trips(random_poly):
    for _ in range(10):
        a, b = random_poly(2), random_poly(2)
        assert a + b == b + a
        assert (a - b) + b == a


def test_conj_examples():
    assert poly_conj(z1) == zb1
    p = WPolynomial.monomial((1, 0), (0, 2), I)
    assert poly_conj(p) == WPolynomial.monomial((0, 2), (1, 0), -I)
    expected = WPolynomial.monomial((1, 2), (0, 1)) - WPolynomial.monomial((2, 1), (1, 0), I)
    assert poly_conj(make_P()) == expected


def test_conj_is_involution(random_poly):
    for _ in range(10):
        p = random_poly(3)
        assert poly_conj(poly_conj(p)) == p


def test_d_zbar_examples():
    P = make_P()
    assert d_zbar(z1 * zb1, 1) == z1
    assert d_zbar(P, 1) == z2 * zb2 * zb2 + (z1 * zb1 * zb2).scale(2 * I)
    assert d_zbar(P, 2) == 2 * z2 * zb1 * zb2 + (z1 * zb1 * zb1).scale(I)


def test_derivative_rejects_bad_index():
    with pytest.raises(DimensionError):
        d_z(z1, 3)
    with pytest.raises(DimensionError):
        d_zbar(z1, 0)


def test_leibniz_rule(random_poly):
    for _ in range(10):
        a, b = random_poly(2, 4), random_poly(2, 4)
        for j in (1, 2):
            assert d_zbar(a * b, j) == d_zbar(a, j) * b + a * d_zbar(b, j)
            assert d_z(a * b, j) == d_z(a, j) * b + a * d_z(b, j)


def test_conj_commutes_with_derivative(random_poly):
    for _ in range(10):
        p = random_poly(3)
        for j in (1, 2, 3):
            assert poly_conj(d_z(p, j)) == d_zbar(poly_conj(p), j)


@pytest.mark.parametrize('z, expected', [
    ((1, 0), 0),
    ((0, 1), 0),
    (tuple(DIAGONAL), 0.25 + 0.25j),
])
def test_eval_P(z, expected):
    assert make_P().eval(z) == pytest.approx(expected, abs=1e-15)


def test_eval_rejects_length_mismatch():
    with pytest.raises(DimensionError):
        make_P().eval([1, 0, 0])


def test_eval_is_a_homomorphism(random_poly, unit_points):
    for z in unit_points(2, 10):
        a, b = random_poly(2), random_poly(2)
        assert (a * b).eval(z) == pytest.approx(a.eval(z) * b.eval(z), rel=1e-12, abs=1e-12)


def test_eval_batch_matches_scalar_eval(random_poly, unit_points):
    p = random_poly(3, 8)
    points = unit_points(3, 25)
    np.testing.assert_allclose(eval_batch(p, points), [p.eval(z) for z in points], rtol=1e-12, atol=1e-13)
    with pytest.raises(DimensionError):
        eval_batch(p, points[:, :2])


def test_fd_linear_and_holomorphic(unit_points):
    z = unit_points(2, 1)[0]
    assert wirtinger_fd(zb1.eval, z, 1) == pytest.approx(1, abs=1e-9)
    assert wirtinger_fd(z1.eval, z, 1) == pytest.approx(0, abs=1e-9)
    assert wirtinger_fd(z1.eval, z, 1, wrt='z') == pytest.approx(1, abs=1e-9)


def test_fd_matches_symbolic_derivative_of_P():
    P = make_P()
    exact = d_zbar(P, 1).eval(DIAGONAL)
    assert wirtinger_fd(P.eval, DIAGONAL, 1) == pytest.approx(exact, rel=1e-6)


def test_fd_agrees_on_random_polynomials(random_poly, unit_points):
    for z in unit_points(2, 10):
        p = random_poly(2, 6, 1)
        for j in (1, 2):
            for wrt, derivative in (('zbar', d_zbar), ('z', d_z)):
                exact = derivative(p, j).eval(z)
                estimate = wirtinger_fd(p.eval, z, j, 1e-5, wrt=wrt)
                assert abs(exact - estimate) <= 1e-6 * (1 + abs(exact))


def test_is_real():
    assert is_real(z1 * zb1)
    assert not is_real(z1)
    assert is_real(z1 * zb1 + z2 * zb2 - 1)


def test_real_imag_parts_recombine(random_poly):
    g = random_poly(2)
    u, v = real_imag_parts(g)
    assert is_real(u) and is_real(v)
    assert u + v.scale(I) == g


def test_embed_and_substitute_zero():
    p = embed(z1 * zb2, 4, offset=2)
    assert p == WPolynomial.variable(4, 3) * WPolynomial.conj_variable(4, 4)
    assert substitute_zero(p, [1]) == p
    assert substitute_zero(p, [4]).is_zero()
    with pytest.raises(DimensionError):
        embed(z1, 2, offset=1)


def test_dict_codec_canonicalizes_input():
    data = {'m': 1, 'terms': [
        {'alpha': [1], 'beta': [0], 're': '1/2', 'im': '0/1'},
        {'alpha': [1], 'beta': [0], 're': '1/2', 'im': '-1/3'},
        {'alpha': [0], 'beta': [0], 're': '0/1', 'im': '0/1'},
    ]}
    p = poly_from_dict(data)
    assert p == WPolynomial.monomial((1,), (0,), GaussianRational(1, Fraction(-1, 3)))
    assert poly_to_dict(p) == {'m': 1, 'terms': [{'alpha': [1], 'beta': [0], 're': '1/1', 'im': '-1/3'}]}


@pytest.mark.parametrize('data', [
    {'m': 1, 'terms': [{'alpha': [1], 'beta': [0], 're': '0.5', 'im': '0/1'}]},
    {'m': 1, 'terms': [{'alpha': [1], 'beta': [0, 1], 're': '1/1', 'im': '0/1'}]},
    {'m': 1},
    {'m': 'one', 'terms': []},
    {'m': 1, 'terms': [{'alpha': [1], 'beta': [0], 're': '1/0', 'im': '0/1'}]},
    {'m': 1, 'terms': [{'alpha': [1.7], 'beta': [0], 're': '1/1', 'im': '0/1'}]},
    {'m': 1, 'terms': [{'alpha': [True], 'beta': [0], 're': '1/1', 'im': '0/1'}]},
    {'m': 1, 'terms': [{'alpha': '1', 'beta': [0], 're': '1/1', 'im': '0/1'}]},
])
def test_dict_codec_rejects_malformed(data):
    with pytest.raises(SerializationError):
        poly_from_dict(data)
