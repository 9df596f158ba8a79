"""
Aritmética exata em corpos ciclotômicos Q(ζ_n).

Elementos são guardados na base de potências 1, ζ, ..., ζ^{φ(n)-1} módulo o
polinômio ciclotômico Φ_n, com coeficientes racionais exatos (domínio QQ do
sympy). Igualdade é comparação de coeficientes; conjugação complexa e
automorfismos de Galois são permutações de potências seguidas de redução.

Sinais de elementos reais são certificados por aritmética intervalar do
mpmath; testes de zero são sempre simbólicos.
"""

from __future__ import annotations

import logging
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, List, NamedTuple, Sequence, Tuple, Union

import mpmath
from mpmath import iv
from sympy import Rational, factorint, totient
from sympy.polys.densearith import dup_add, dup_mul, dup_rem
from sympy.polys.densebasic import dup_strip
from sympy.polys.domains import QQ
from sympy.polys.euclidtools import dup_invert
from sympy.polys.factortools import dup_zz_cyclotomic_poly
from sympy.polys.polyerrors import NotInvertible

from lattice_system.exceptions import (
    DivisionByZero, IncompatibleFields, Inconclusive, InvalidAutomorphism, NotReal,
)

logger = logging.getLogger("LatticeSystem")

Scalar = Union[int, Fraction, Rational]

# Precisão inicial e teto da certificação de sinais (bits)
SIGN_START_BITS = 64
SIGN_MAX_BITS = 1 << 16

# O contexto iv do mpmath é global; a precisão é trocada sob lock
_IV_LOCK = threading.RLock()


@contextmanager
def interval_precision(bits: int):
    """Executa o bloco com iv.prec = bits, restaurando o valor anterior."""
    with _IV_LOCK:
        old = iv.prec
        iv.prec = bits
        try:
            yield
        finally:
            iv.prec = old


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _to_qq(x) -> "QQ.dtype":
    if isinstance(x, int):
        return QQ(x)
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, Rational):
        return QQ(int(x.p), int(x.q))
    if isinstance(x, QQ.dtype):
        return x
    if isinstance(x, str):
        f = Fraction(x)
        return QQ(f.numerator, f.denominator)
    raise TypeError(f"não é um racional exato: {x!r}")


@lru_cache(maxsize=None)
def _cyclotomic_dup(n: int) -> Tuple:
    """Φ_n como lista densa (grau decrescente) sobre QQ."""
    return tuple(QQ(int(c)) for c in dup_zz_cyclotomic_poly(n, QQ))


@lru_cache(maxsize=None)
def _degree(n: int) -> int:
    return int(totient(n))


def _reduce_dup(f: Sequence, n: int) -> Tuple:
    """Reduz um polinômio denso (grau decrescente) módulo Φ_n."""
    d = _degree(n)
    r = dup_rem(dup_strip(list(f)), list(_cyclotomic_dup(n)), QQ)
    coeffs = [QQ.zero] * d
    for i, c in enumerate(reversed(r)):
        coeffs[i] = c
    return tuple(coeffs)


@lru_cache(maxsize=None)
def _power_table(n: int) -> Tuple[Tuple, ...]:
    """Coordenadas de ζ^j na base de potências, para 0 <= j < n."""
    table = []
    for j in range(n):
        monomial = [QQ.one] + [QQ.zero] * j
        table.append(_reduce_dup(monomial, n))
    return tuple(table)


def _to_dup(coeffs: Sequence) -> List:
    return dup_strip(list(reversed(coeffs)))


def surd_conductor(d: int) -> int:
    """Condutor de Q(√d): o menor m com √d em Q(ζ_m)."""
    if d == 0:
        raise ValueError("√0 não define um corpo quadrático")
    sign = -1 if d < 0 else 1
    free = sign
    for p, e in factorint(abs(d)).items():
        if e % 2:
            free *= p
    if free == 1:
        return 1
    disc = free if free % 4 == 1 else 4 * free
    return abs(disc)


@dataclass(frozen=True)
class CycField:
    """
    O corpo Q(ζ_n) com o mergulho complexo ζ_n ↦ exp(2πik/n).

    Args:
        n: Condutor
        embedding_k: Expoente k do mergulho, coprimo com n
    """
    n: int
    embedding_k: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"condutor inválido: {self.n}")
        k = self.embedding_k % self.n if self.n > 1 else 1
        if gcd(k, self.n) != 1:
            raise InvalidAutomorphism(f"mergulho k={self.embedding_k} não é coprimo com n={self.n}")
        object.__setattr__(self, "embedding_k", k)

    # === Estrutura ===

    @property
    def basis_dim(self) -> int:
        return _degree(self.n)

    @property
    def order_of_roots(self) -> int:
        """Ordem do grupo de raízes da unidade do corpo."""
        return self.n if self.n % 2 == 0 else 2 * self.n

    def units(self) -> List[int]:
        """Os expoentes k de (Z/n)*, em ordem crescente."""
        if self.n <= 2:
            return [1]
        return [k for k in range(1, self.n) if gcd(k, self.n) == 1]

    def __str__(self) -> str:
        return f"Q(zeta_{self.n})"

    # === Construção de elementos ===

    def element(self, coeffs: Iterable) -> "CycElem":
        """Elemento a partir de coordenadas na base de potências (qualquer comprimento)."""
        values = [_to_qq(c) for c in coeffs]
        if len(values) == self.basis_dim:
            return CycElem(self, tuple(values))
        return CycElem(self, _reduce_dup(list(reversed(values)), self.n))

    def __call__(self, x) -> "CycElem":
        if isinstance(x, CycElem):
            if x.field != self:
                raise IncompatibleFields(f"{x.field} != {self}; use lift()")
            return x
        q = _to_qq(x)
        return CycElem(self, (q,) + (QQ.zero,) * (self.basis_dim - 1))

    @property
    def zero(self) -> "CycElem":
        return self(0)

    @property
    def one(self) -> "CycElem":
        return self(1)

    @property
    def gen(self) -> "CycElem":
        """O gerador ζ_n."""
        return self.zeta_power(1)

    def zeta_power(self, j: int) -> "CycElem":
        return CycElem(self, _power_table(self.n)[j % self.n])

    def root_of_unity(self, a: int, b: int) -> "CycElem":
        """exp(2πi·a/b), exigindo que a ordem reduzida divida o condutor."""
        if b == 0:
            raise DivisionByZero("raiz da unidade com denominador 0")
        if b < 0:
            a, b = -a, -b
        g = gcd(a, b)
        a, order = a // g, b // g
        if self.n % order == 0:
            return self.zeta_power(a * (self.n // order))
        if self.n % 2 and (2 * self.n) % order == 0:
            # ζ_{2n} = -ζ_n^{(n+1)/2}
            m = a * (2 * self.n // order)
            value = self.zeta_power(m * (self.n + 1) // 2)
            return -value if m % 2 else value
        raise IncompatibleFields(f"exp(2πi·{a}/{order}) não pertence a {self}")

    def imaginary_unit(self) -> "CycElem":
        if self.n % 4:
            raise IncompatibleFields(f"i não pertence a {self}")
        return self.zeta_power(self.n // 4)

    def quadratic_surd(self, d: int) -> "CycElem":
        """
        √d como elemento do corpo, pelo produto de somas de Gauss.

        O ramo é o do mergulho padrão (k=1): real positivo se d > 0,
        imaginário com parte imaginária positiva se d < 0.

        Raises:
            IncompatibleFields: se o condutor de √d não divide n
        """
        conductor = surd_conductor(d)
        if self.n % conductor:
            raise IncompatibleFields(f"√{d} tem condutor {conductor}, fora de {self}")
        standard = CycField(self.n)
        value = standard.one
        rest = d
        square = 1
        for p, e in factorint(abs(d)).items():
            square *= p ** (e // 2)
            if e % 2 == 0 or p == 2:
                continue
            value = value * standard.gauss_sum(p)
            rest //= p if (p % 4 == 1) else -p
        # rest agora é d dividido por Π p*, em {±1, ±2} vezes um quadrado
        rest //= square * square
        if rest == -1:
            value = value * standard.imaginary_unit()
        elif rest == 2:
            value = value * (standard.root_of_unity(1, 8) + standard.root_of_unity(-1, 8))
        elif rest == -2:
            value = value * (standard.root_of_unity(1, 8) + standard.root_of_unity(3, 8))
        value = value * square
        if d > 0 and real_sign(value) < 0:
            value = -value
        if d < 0 and _imag_sign(value) < 0:
            value = -value
        return CycElem(self, value.coeffs)

    def gauss_sum(self, p: int) -> "CycElem":
        """Σ (a/p) ζ_p^a para p primo ímpar dividindo n."""
        total = self.zero
        for a in range(1, p):
            legendre = 1 if pow(a, (p - 1) // 2, p) == 1 else -1
            term = self.root_of_unity(a, p)
            total = total + term if legendre == 1 else total - term
        return total

    def roots_of_unity(self) -> List["CycElem"]:
        """Todas as raízes da unidade do corpo (±ζ^j)."""
        roots = []
        for j in range(self.n):
            z = self.zeta_power(j)
            roots.append(z)
            if self.n % 2:
                roots.append(-z)
        return roots

    # === Coerção explícita ===

    def lift(self, m: int) -> "CycField":
        """O corpo Q(ζ_lcm(n,m)) com mergulho compatível com o deste corpo."""
        big = _lcm(self.n, m)
        k = self.embedding_k
        while gcd(k, big) != 1:
            k += self.n
        return CycField(big, k)

    def with_embedding(self, k: int) -> "CycField":
        return CycField(self.n, k)


class ComplexInterval(NamedTuple):
    """Retângulo complexo certificado (partes real e imaginária intervalares)."""
    real: "iv.mpf"
    imag: "iv.mpf"

    @staticmethod
    def endpoints(interval) -> Tuple[mpmath.mpf, mpmath.mpf]:
        lo, hi = interval._mpi_
        return mpmath.mp.make_mpf(lo), mpmath.mp.make_mpf(hi)

    def contains_zero(self) -> bool:
        re_lo, re_hi = self.endpoints(self.real)
        im_lo, im_hi = self.endpoints(self.imag)
        return re_lo <= 0 <= re_hi and im_lo <= 0 <= im_hi

    def midpoint(self) -> mpmath.mpc:
        re_lo, re_hi = self.endpoints(self.real)
        im_lo, im_hi = self.endpoints(self.imag)
        return mpmath.mpc((re_lo + re_hi) / 2, (im_lo + im_hi) / 2)

    def width(self) -> mpmath.mpf:
        re_lo, re_hi = self.endpoints(self.real)
        im_lo, im_hi = self.endpoints(self.imag)
        return max(re_hi - re_lo, im_hi - im_lo)


class CycElem:
    """Elemento de Q(ζ_n) em forma canônica (imutável)."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: CycField, coeffs: Tuple):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CycElem é imutável")

    # === Coerção de operandos ===

    def _coerce(self, other) -> "CycElem":
        if isinstance(other, CycElem):
            if other.field != self.field:
                raise IncompatibleFields(f"{self.field} e {other.field}; use lift()")
            return other
        try:
            return self.field(other)
        except TypeError:
            return NotImplemented

    # === Operações de corpo ===

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElem(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycElem(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycElem(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) or isinstance(other, QQ.dtype):
            q = _to_qq(other)
            return CycElem(self.field, tuple(a * q for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.field.basis_dim == 1:
            return CycElem(self.field, (self.coeffs[0] * other.coeffs[0],))
        product = dup_mul(_to_dup(self.coeffs), _to_dup(other.coeffs), QQ)
        return CycElem(self.field, _reduce_dup(product, self.field.n))

    __rmul__ = __mul__

    def inverse(self) -> "CycElem":
        if self.is_zero():
            raise DivisionByZero(f"inverso de zero em {self.field}")
        if self.field.basis_dim == 1:
            return CycElem(self.field, (QQ.one / self.coeffs[0],))
        try:
            inv = dup_invert(_to_dup(self.coeffs), list(_cyclotomic_dup(self.field.n)), QQ)
        except NotInvertible as e:
            raise DivisionByZero(str(e)) from e
        return CycElem(self.field, _reduce_dup(inv, self.field.n))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = self.field.one
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # === Igualdade e hash ===

    def __eq__(self, other):
        if isinstance(other, CycElem):
            return self.field == other.field and self.coeffs == other.coeffs
        try:
            return self.coeffs == self.field(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.field.n, self.field.embedding_k, self.coeffs)))
        return self._hash

    # === Predicados ===

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == QQ.one and not any(self.coeffs[1:])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_real(self) -> bool:
        return conj(self) == self

    def is_algebraic_integer(self) -> bool:
        """Inteiro de Z[ζ_n]: todas as coordenadas inteiras."""
        return all(QQ.denom(c) == 1 for c in self.coeffs)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} não é racional")
        c = self.coeffs[0]
        return Fraction(int(QQ.numer(c)), int(QQ.denom(c)))

    def norm2(self) -> "CycElem":
        """a·conj(a), o quadrado do módulo."""
        return self * conj(self)

    def __repr__(self) -> str:
        coeffs = ", ".join(str(Fraction(int(QQ.numer(c)), int(QQ.denom(c)))) for c in self.coeffs)
        return f"Q(zeta_{self.field.n}): [{coeffs}]"


# === Automorfismos de Galois ===

@dataclass(frozen=True)
class GaloisAut:
    """O automorfismo σ_k: ζ_n ↦ ζ_n^k."""
    field: CycField
    k: int

    def __post_init__(self):
        n = self.field.n
        if n > 2 and gcd(self.k, n) != 1:
            raise InvalidAutomorphism(f"k={self.k} não é coprimo com n={n}")
        object.__setattr__(self, "k", self.k % n if n > 2 else 1)

    def __call__(self, a: CycElem) -> CycElem:
        return galois_apply(self, a)

    def compose(self, other: "GaloisAut") -> "GaloisAut":
        """self ∘ other."""
        return GaloisAut(self.field, self.k * other.k)


def _galois_coeffs(a: CycElem, k: int) -> Tuple:
    n = a.field.n
    if n <= 2 or k % n == 1:
        return a.coeffs
    table = _power_table(n)
    result = [QQ.zero] * a.field.basis_dim
    for j, c in enumerate(a.coeffs):
        if c:
            image = table[(j * k) % n]
            for i, t in enumerate(image):
                if t:
                    result[i] += c * t
    return tuple(result)


def galois_apply(sigma: GaloisAut, a: CycElem) -> CycElem:
    """
    Aplica σ_k coeficiente a coeficiente e reduz.

    Raises:
        InvalidAutomorphism: se σ pertence a outro corpo
    """
    if sigma.field.n != a.field.n:
        raise InvalidAutomorphism(f"σ de {sigma.field} aplicado a elemento de {a.field}")
    return CycElem(a.field, _galois_coeffs(a, sigma.k))


def galois(a: CycElem, k: int) -> CycElem:
    """Atalho para galois_apply(GaloisAut(a.field, k), a)."""
    return galois_apply(GaloisAut(a.field, k), a)


def conj(a: CycElem) -> CycElem:
    """Conjugação complexa ζ ↦ ζ^{n-1}."""
    return CycElem(a.field, _galois_coeffs(a, -1))


# === Coerção explícita ===

def lift(a: CycElem, m: int) -> CycElem:
    """Leva a para Q(ζ_lcm(n,m)) via ζ_n = ζ_N^{N/n}."""
    target = a.field.lift(m)
    if target.n == a.field.n:
        return a
    step = target.n // a.field.n
    table = _power_table(target.n)
    result = [QQ.zero] * target.basis_dim
    for j, c in enumerate(a.coeffs):
        if c:
            for i, t in enumerate(table[j * step]):
                if t:
                    result[i] += c * t
    return CycElem(target, tuple(result))


def lift_to(a: CycElem, field: CycField) -> CycElem:
    """Leva a para um corpo dado (cujo condutor é múltiplo do de a)."""
    if field.n % a.field.n:
        raise IncompatibleFields(f"{a.field} não está contido em {field}")
    lifted = lift(a, field.n)
    return CycElem(field, lifted.coeffs)


def with_embedding(a: CycElem, k: int) -> CycElem:
    """O mesmo elemento visto sob o mergulho ζ ↦ exp(2πik/n)."""
    return CycElem(a.field.with_embedding(k), a.coeffs)


def common_field(*fields: CycField) -> CycField:
    """Menor corpo ciclotômico (mergulho padrão) contendo todos os dados."""
    n = 1
    for f in fields:
        n = _lcm(n, f.n)
    return CycField(n)


# === Mergulhos numéricos ===

def embed_numeric(a: CycElem, precision_bits: int = 128) -> ComplexInterval:
    """
    Intervalo complexo certificado contendo o valor de a sob o mergulho do corpo.

    Args:
        a: Elemento
        precision_bits: Precisão de trabalho (>= 32)

    Returns:
        ComplexInterval com as partes real e imaginária
    """
    if precision_bits < 32:
        raise ValueError("precision_bits deve ser >= 32")
    n, k = a.field.n, a.field.embedding_k
    with interval_precision(precision_bits):
        re = iv.mpf(0)
        im = iv.mpf(0)
        for j, c in enumerate(a.coeffs):
            if not c:
                continue
            value = iv.mpf(int(QQ.numer(c))) / int(QQ.denom(c))
            if j == 0:
                re += value
                continue
            angle = 2 * iv.pi * (j * k) / n
            re += value * iv.cos(angle)
            im += value * iv.sin(angle)
    return ComplexInterval(re, im)


def to_complex(a: CycElem, precision_bits: int = 128) -> mpmath.mpc:
    """Valor numérico (não certificado) sob o mergulho do corpo."""
    n, k = a.field.n, a.field.embedding_k
    with mpmath.workprec(precision_bits):
        total = mpmath.mpc(0)
        for j, c in enumerate(a.coeffs):
            if c:
                value = mpmath.mpf(int(QQ.numer(c))) / int(QQ.denom(c))
                total += value * mpmath.expjpi(mpmath.mpf(2 * j * k) / n)
        return total


def approx(a: CycElem, digits: int = 15, precision_bits: int = 128) -> str:
    """Representação decimal com `digits` algarismos significativos."""
    value = to_complex(a, precision_bits)
    with mpmath.workprec(precision_bits):
        if a.is_real():
            return mpmath.nstr(value.real, digits)
        return mpmath.nstr(value, digits)


def _certified_sign(a: CycElem, part: str) -> int:
    bits = SIGN_START_BITS
    while bits <= SIGN_MAX_BITS:
        box = embed_numeric(a, bits)
        lo, hi = ComplexInterval.endpoints(box.real if part == "real" else box.imag)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        logger.debug(f"Sinal de {a!r} indeciso com {bits} bits; dobrando a precisão")
        bits *= 2
    raise Inconclusive(f"sinal de {a!r} não certificado até {SIGN_MAX_BITS} bits")


def real_sign(a: CycElem) -> int:
    """
    Sinal exato de um elemento real sob o mergulho do corpo.

    Zero é decidido simbolicamente; para elementos não nulos a precisão começa
    em 64 bits e dobra até o intervalo excluir 0.

    Raises:
        NotReal: se conj(a) != a
    """
    if not a.is_real():
        raise NotReal(f"{a!r} não é real")
    if a.is_zero():
        return 0
    if a.is_rational():
        return 1 if a.coeffs[0] > 0 else -1
    return _certified_sign(a, "real")


def _imag_sign(a: CycElem) -> int:
    if conj(a) == a:
        return 0
    return _certified_sign(a, "imag")


def real_part(a: CycElem) -> CycElem:
    """(a + conj(a))/2."""
    return (a + conj(a)) * QQ(1, 2)


def imag_times_i(a: CycElem) -> CycElem:
    """i·Im(a) = (a - conj(a))/2, definido em qualquer corpo."""
    return (a - conj(a)) * QQ(1, 2)
