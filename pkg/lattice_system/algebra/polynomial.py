"""
Polinômios em uma variável com coeficientes num corpo ciclotômico.

Usados para polinômios característicos, para o teste de divisibilidade por
x^N - 1 (ordem finita) e para a contagem de raízes reais por sequências de
Sturm, com sinais certificados por real_sign.
"""

from __future__ import annotations

import logging
from typing import Callable, Iterable, List, Sequence, Tuple

from lattice_system.algebra.cyclofield import CycElem, CycField, conj, real_sign
from lattice_system.exceptions import DivisionByZero, IncompatibleFields, NotReal

logger = logging.getLogger("LatticeSystem")


class FieldPolynomial:
    """
    Polinômio sobre um CycField, coeficientes do grau 0 ao grau máximo.

    O polinômio nulo tem grau -1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CycField, coeffs: Iterable):
        values = [field(c) for c in coeffs]
        while values and values[-1].is_zero():
            values.pop()
        self.field = field
        self.coeffs: Tuple[CycElem, ...] = tuple(values)

    # === Construtores ===

    @classmethod
    def constant(cls, field: CycField, c) -> "FieldPolynomial":
        return cls(field, [c])

    @classmethod
    def x(cls, field: CycField) -> "FieldPolynomial":
        return cls(field, [0, 1])

    @classmethod
    def monomial(cls, field: CycField, degree: int, c=1) -> "FieldPolynomial":
        return cls(field, [0] * degree + [c])

    @classmethod
    def from_roots(cls, field: CycField, roots: Sequence[CycElem]) -> "FieldPolynomial":
        result = cls.constant(field, 1)
        for r in roots:
            result = result * cls(field, [-r, 1])
        return result

    # === Propriedades ===

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> CycElem:
        if not self.coeffs:
            return self.field.zero
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.coeffs)

    def coefficient(self, k: int) -> CycElem:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    # === Aritmética ===

    def _check(self, other: "FieldPolynomial"):
        if other.field != self.field:
            raise IncompatibleFields(f"polinômios sobre {self.field} e {other.field}")

    def __add__(self, other: "FieldPolynomial") -> "FieldPolynomial":
        self._check(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return FieldPolynomial(self.field, [self.coefficient(k) + other.coefficient(k) for k in range(size)])

    def __neg__(self) -> "FieldPolynomial":
        return FieldPolynomial(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: "FieldPolynomial") -> "FieldPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "FieldPolynomial":
        if not isinstance(other, FieldPolynomial):
            c = self.field(other)
            return FieldPolynomial(self.field, [a * c for a in self.coeffs])
        self._check(other)
        if self.is_zero() or other.is_zero():
            return FieldPolynomial(self.field, [])
        result = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                result[i + j] = result[i + j] + a * b
        return FieldPolynomial(self.field, result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "FieldPolynomial":
        result = FieldPolynomial.constant(self.field, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def divmod(self, other: "FieldPolynomial") -> Tuple["FieldPolynomial", "FieldPolynomial"]:
        """
        Divisão euclidiana self = q·other + r com grau(r) < grau(other).

        Raises:
            DivisionByZero: se other é o polinômio nulo
        """
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("divisão por polinômio nulo")
        remainder = list(self.coeffs)
        inv_lead = other.leading.inverse()
        d = other.degree
        quotient = [self.field.zero] * max(len(remainder) - d, 0)
        for k in range(len(remainder) - 1, d - 1, -1):
            c = remainder[k]
            if c.is_zero():
                continue
            factor = c * inv_lead
            quotient[k - d] = factor
            for j, b in enumerate(other.coeffs):
                remainder[k - d + j] = remainder[k - d + j] - factor * b
        return FieldPolynomial(self.field, quotient), FieldPolynomial(self.field, remainder[:d])

    def __mod__(self, other: "FieldPolynomial") -> "FieldPolynomial":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "FieldPolynomial") -> "FieldPolynomial":
        return self.divmod(other)[0]

    def monic(self) -> "FieldPolynomial":
        if self.is_zero():
            return self
        return self * self.leading.inverse()

    def derivative(self) -> "FieldPolynomial":
        return FieldPolynomial(self.field, [c * k for k, c in enumerate(self.coeffs)][1:])

    def map_coeffs(self, fn: Callable[[CycElem], CycElem], field: CycField = None) -> "FieldPolynomial":
        """Aplica fn a cada coeficiente (conjugação, Galois, lift)."""
        return FieldPolynomial(field or self.field, [fn(c) for c in self.coeffs])

    def __call__(self, x: CycElem) -> CycElem:
        """Avaliação de Horner num elemento do corpo."""
        value = self.field.zero
        for c in reversed(self.coeffs):
            value = value * x + c
        return value

    def powmod(self, exponent: int, modulus: "FieldPolynomial") -> "FieldPolynomial":
        """self^exponent mod modulus por quadrados sucessivos."""
        result = FieldPolynomial.constant(self.field, 1) % modulus
        base = self % modulus
        while exponent:
            if exponent & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            exponent >>= 1
        return result

    # === Igualdade ===

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldPolynomial):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self) -> str:
        terms = [f"({c!r})*x^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(terms) if terms else "0"


def poly_gcd(a: FieldPolynomial, b: FieldPolynomial) -> FieldPolynomial:
    """Máximo divisor comum mônico (Euclides)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(f: FieldPolynomial) -> FieldPolynomial:
    """f / gcd(f, f'), mônico; em característica 0 tem as mesmas raízes, todas simples."""
    if f.degree <= 0:
        return f.monic()
    g = poly_gcd(f, f.derivative())
    return (f // g).monic()


def divides(f: FieldPolynomial, g: FieldPolynomial) -> bool:
    return (g % f).is_zero()


def conj_poly(f: FieldPolynomial) -> FieldPolynomial:
    return f.map_coeffs(conj)


def sturm_sequence(f: FieldPolynomial) -> List[FieldPolynomial]:
    """Sequência de Sturm f, f', -rem(...), ... até o resto nulo."""
    sequence = [f, f.derivative()]
    while not sequence[-1].is_zero():
        sequence.append(-(sequence[-2] % sequence[-1]))
    sequence.pop()
    return sequence


def _sign_changes(signs: Sequence[int]) -> int:
    nonzero = [s for s in signs if s]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)


def count_real_roots(f: FieldPolynomial) -> int:
    """
    Número de raízes reais distintas de f pelo teorema de Sturm.

    Raises:
        NotReal: se algum coeficiente de f não é real
    """
    if not f.is_real():
        raise NotReal("contagem de Sturm exige coeficientes reais")
    if f.degree <= 0:
        return 0
    sequence = sturm_sequence(f)
    at_plus = [real_sign(p.leading) for p in sequence]
    at_minus = [s if p.degree % 2 == 0 else -s for p, s in zip(sequence, at_plus)]
    return _sign_changes(at_minus) - _sign_changes(at_plus)


def cayley_to_real_line(f: FieldPolynomial, a: CycElem) -> FieldPolynomial:
    """
    q(y) = Σ c_k (y - a)^k (y - ā)^{d-k}, para a com Im(a) > 0.

    Raízes de f no círculo unitário diferentes de 1 correspondem a raízes
    reais de q, via x = (y - a)/(y - ā); x = 1 corresponde a y = ∞.
    """
    field = f.field
    d = f.degree
    minus_a = FieldPolynomial(field, [-a, 1])
    minus_abar = FieldPolynomial(field, [-conj(a), 1])
    powers_a = [FieldPolynomial.constant(field, 1)]
    powers_abar = [FieldPolynomial.constant(field, 1)]
    for _ in range(d):
        powers_a.append(powers_a[-1] * minus_a)
        powers_abar.append(powers_abar[-1] * minus_abar)
    result = FieldPolynomial(field, [])
    for k, c in enumerate(f.coeffs):
        if not c.is_zero():
            result = result + powers_a[k] * powers_abar[d - k] * c
    return result
