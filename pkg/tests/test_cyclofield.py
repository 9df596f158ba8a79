from fractions import Fraction

import mpmath
import pytest

from lattice_system.algebra.cyclofield import (
    CycField, GaloisAut, approx, conj, embed_numeric, galois, galois_apply, imag_times_i, lift, lift_to, real_part,
    real_sign, surd_conductor,
)
from lattice_system.exceptions import (
    DivisionByZero, IncompatibleFields, InvalidAutomorphism, NotReal,
)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 8, 12, 15, 24])
def test_generator_has_order_n(n):
    field = CycField(n)
    assert (field.gen ** n).is_one()
    if n > 2:
        assert not (field.gen ** (n // 2 if n % 2 == 0 else 1)).is_one()


def test_basis_dimension_is_euler_phi():
    assert [CycField(n).basis_dim for n in (1, 3, 4, 5, 8, 12, 15)] == [1, 2, 2, 4, 4, 4, 8]


def test_imaginary_unit_squares_to_minus_one(q4):
    i = q4.imaginary_unit()
    assert i * i == -1
    with pytest.raises(IncompatibleFields):
        CycField(3).imaginary_unit()


def test_root_of_unity_in_odd_conductor():
    field = CycField(3)
    zeta6 = field.root_of_unity(1, 6)
    assert zeta6 == -field.zeta_power(2)
    assert (zeta6 ** 6).is_one()
    with pytest.raises(IncompatibleFields):
        field.root_of_unity(1, 4)


@pytest.mark.parametrize("d,conductor", [(2, 8), (3, 12), (5, 5), (-1, 4), (-3, 3), (6, 24), (4, 1), (12, 12)])
def test_surd_conductor(d, conductor):
    assert surd_conductor(d) == conductor


@pytest.mark.parametrize("d,n", [(2, 8), (3, 12), (5, 5), (-1, 4), (-3, 3), (12, 12), (-15, 15), (6, 24)])
def test_quadratic_surd_squares_to_d(d, n):
    root = CycField(n).quadratic_surd(d)
    assert root * root == d
    if d > 0:
        assert real_sign(root) == 1


def test_quadratic_surd_outside_field():
    with pytest.raises(IncompatibleFields):
        CycField(5).quadratic_surd(3)


def test_division_and_inverse(q12):
    a = q12.gen + 2
    assert (a / a).is_one()
    assert a * a.inverse() == 1
    with pytest.raises(DivisionByZero):
        q12.zero.inverse()
    with pytest.raises(ZeroDivisionError):
        q12.one / q12.zero


def test_mixed_fields_need_explicit_lift():
    a, b = CycField(3).gen, CycField(4).gen
    with pytest.raises(IncompatibleFields):
        a + b
    total = lift(a, 4) + lift(b, 3)
    assert total.field.n == 12
    assert lift(a, 4) == CycField(12).zeta_power(4)


def test_lift_to_requires_multiple():
    with pytest.raises(IncompatibleFields):
        lift_to(CycField(3).gen, CycField(4))


def test_conjugation_is_inverse_on_roots_of_unity(q12):
    for j in range(12):
        z = q12.zeta_power(j)
        assert conj(z) == z.inverse()
        assert conj(conj(z)) == z


def test_galois_automorphism_properties():
    field = CycField(5)
    z = field.gen
    assert galois(z, 2) == z ** 2
    sigma, tau = GaloisAut(field, 2), GaloisAut(field, 3)
    assert sigma.compose(tau).k == 1
    assert tau(sigma(z)) == z
    with pytest.raises(InvalidAutomorphism):
        GaloisAut(CycField(12), 2)
    with pytest.raises(InvalidAutomorphism):
        GaloisAut(CycField(3), 1)(CycField(4).gen)


def test_galois_apply_commutes_with_conj():
    field = CycField(12)
    a = field.gen + 3 * field.gen ** 5 - 2
    for k in field.units():
        sigma = GaloisAut(field, k)
        assert galois_apply(sigma, conj(a)) == conj(galois_apply(sigma, a))
        assert galois_apply(sigma, a * a) == galois_apply(sigma, a) ** 2


def test_real_sign():
    field = CycField(5)
    z = field.gen
    assert real_sign(z + z ** 4) == 1
    assert real_sign(z ** 2 + z ** 3) == -1
    assert real_sign(field.zero) == 0
    assert real_sign(field(Fraction(-1, 7))) == -1
    with pytest.raises(NotReal):
        real_sign(z)


def test_real_sign_close_to_zero():
    field = CycField(12)
    root3 = field.quadratic_surd(3)
    # 1.7320508075688772 - 17320508075688772/10^16 é positivo e minúsculo
    approximation = field(Fraction(17320508075688772, 10 ** 16))
    assert real_sign(root3 - approximation) == 1
    assert real_sign(approximation - root3) == -1


def test_embed_numeric_encloses_value():
    root2 = CycField(8).quadratic_surd(2)
    box = embed_numeric(root2, 128)
    lo, hi = box.endpoints(box.real)
    with mpmath.workprec(256):
        root = mpmath.sqrt(2)
    assert lo <= root <= hi
    assert hi - lo < mpmath.mpf(2) ** -100
    im_lo, im_hi = box.endpoints(box.imag)
    assert im_lo <= 0 <= im_hi
    assert not box.contains_zero()
    assert box.width() < mpmath.mpf(2) ** -100
    assert abs(box.midpoint() - root) < mpmath.mpf(2) ** -100
    assert embed_numeric(CycField(8).zero, 64).contains_zero()
    with pytest.raises(ValueError):
        embed_numeric(root2, 16)


def test_embedding_choice_changes_numeric_value():
    field = CycField(5)
    a = field.gen + field.gen ** 4
    other = field.with_embedding(2).element(a.coeffs)
    assert approx(a).startswith("0.618033988749")
    assert approx(other).startswith("-1.61803398874")


def test_predicates(q12):
    alpha = (CycField(3).gen - 1).inverse()
    assert not alpha.is_algebraic_integer()
    assert (q12.gen * 3 - 1).is_algebraic_integer()
    assert q12(Fraction(2, 3)).is_rational()
    assert q12(Fraction(2, 3)).rational_value() == Fraction(2, 3)
    assert (q12.gen + conj(q12.gen)).is_real()
    assert q12.gen.norm2().is_one()


def test_elements_are_hashable_and_immutable(q4):
    a = q4.gen
    assert {a: 1}[q4.imaginary_unit()] == 1
    with pytest.raises(AttributeError):
        a.coeffs = ()


def test_real_and_imaginary_parts():
    field = CycField(12)
    z = field.gen
    assert real_part(z) == field.quadratic_surd(3) / 2
    assert imag_times_i(z) == field.imaginary_unit() / 2
    assert real_part(z) + imag_times_i(z) == z
    assert real_part(z).is_real()


@pytest.mark.parametrize("n,order", [(1, 2), (3, 6), (4, 4), (5, 10), (12, 12)])
def test_order_of_roots(n, order):
    field = CycField(n)
    assert field.order_of_roots == order
    assert len(set(field.roots_of_unity())) == order
