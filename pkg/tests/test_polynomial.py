import pytest

from lattice_system.algebra.cyclofield import CycField
from lattice_system.algebra.polynomial import (
    FieldPolynomial, cayley_to_real_line, conj_poly, count_real_roots, divides, poly_gcd, squarefree_part,
)
from lattice_system.exceptions import DivisionByZero, NotReal

Q = CycField(1)


def poly(*coeffs, field=Q):
    return FieldPolynomial(field, coeffs)


def test_degree_and_trailing_zeros():
    assert poly(1, 2, 0, 0).degree == 1
    assert poly().degree == -1
    assert poly(0, 0).is_zero()


def test_divmod_reconstructs_dividend():
    f = poly(-1, 0, 0, 1)
    g = poly(-1, 1)
    q, r = f.divmod(g)
    assert q == poly(1, 1, 1)
    assert r.is_zero()
    q, r = poly(1, 0, 1).divmod(g)
    assert q * g + r == poly(1, 0, 1)
    assert r == poly(2)
    with pytest.raises(DivisionByZero):
        f.divmod(poly())


def test_gcd_and_divides():
    f = FieldPolynomial.from_roots(Q, [Q(1), Q(2), Q(3)])
    g = FieldPolynomial.from_roots(Q, [Q(2), Q(5)])
    assert poly_gcd(f, g) == poly(-2, 1)
    assert divides(poly(-3, 1), f)
    assert not divides(poly(-5, 1), f)


def test_squarefree_part_removes_repeated_roots():
    f = poly(-1, 1) ** 2 * poly(1, 1)
    assert squarefree_part(f) == poly(-1, 0, 1)


@pytest.mark.parametrize("coeffs,expected", [
    ((-2, 0, 1), 2),
    ((1, 0, 1), 0),
    ((-1, 3, -3, 1), 1),
    ((0, -1, 0, 1), 3),
    ((7,), 0),
])
def test_count_real_roots(coeffs, expected):
    assert count_real_roots(poly(*coeffs)) == expected


def test_count_real_roots_with_irrational_coefficients():
    field = CycField(5)
    z = field.gen
    golden = -(z ** 2 + z ** 3)
    # x^2 - φ tem duas raízes reais, x^2 + φ nenhuma
    assert count_real_roots(FieldPolynomial(field, [-golden, 0, 1])) == 2
    assert count_real_roots(FieldPolynomial(field, [golden, 0, 1])) == 0


def test_count_real_roots_rejects_complex_coefficients(q4):
    with pytest.raises(NotReal):
        count_real_roots(FieldPolynomial(q4, [q4.gen, 1]))


def test_evaluation_and_powmod():
    f = poly(1, 1, 1)
    assert f(Q(2)) == 7
    modulus = poly(1, 0, 1)
    # x^4 ≡ 1 mod x^2 + 1
    assert FieldPolynomial.x(Q).powmod(4, modulus) == poly(1)
    assert FieldPolynomial.x(Q).powmod(2, modulus) == poly(-1)


def test_cayley_transform_counts_unit_circle_roots(q4):
    i = q4.imaginary_unit()
    # raízes 1, -1, i, -i; o 1 vai para o infinito
    f = FieldPolynomial(q4, [-1, 0, 0, 0, 1])
    q = cayley_to_real_line(f, i)
    assert q.degree == 3
    assert count_real_roots(q.monic()) == 3


def test_conjugate_polynomial():
    field = CycField(4)
    i = field.imaginary_unit()
    f = poly(i, 1, field=field)
    assert conj_poly(f) == poly(-i, 1, field=field)
    assert (f * conj_poly(f)).is_real()
