"""
Estabilizadores parabólicos e o grupo de Heisenberg.

Para uma forma em blocos H = [[0, 0, 1], [0, K, 0], [1, 0, 0]] com K positiva
definida, toda isometria que fixa e_0 com entrada de canto unitária se escreve

    P(B, w, t) = [[1, -w*KB, -½ w*Kw + i t], [0, B, w], [0, 0, 1]]

com B em U(K), w horizontal e t real. Translações têm B = I; translações
verticais têm também w = 0.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Matrix, ilcm
from sympy.matrices.normalforms import hermite_normal_form

from lattice_system.algebra.cyclofield import CycElem, CycField, conj, imag_times_i, lift_to, real_sign
from lattice_system.algebra.exactlin import HermForm, MatC, Signature, dot, signature, vector_star
from lattice_system.exceptions import (
    FormMismatch, IncompleteProfile, NotCommonFixedPoint, NotIsometryShape,
    NotParabolicShape, NotUnipotentCorner,
)
from lattice_system.groups.fingroup import DEFAULT_MAX_ORDER, closure
from lattice_system.groups.reflect import Word, format_word

logger = logging.getLogger("LatticeSystem")

Vector = Tuple[CycElem, ...]

DEFAULT_CUSP_WORD_LEN = 6


@dataclass(frozen=True)
class HeisElem:
    """P(B, w, t)."""
    B: MatC
    w: Vector
    t: CycElem

    def is_translation(self) -> bool:
        return self.B.is_identity()

    def is_vertical(self) -> bool:
        return self.is_translation() and all(a.is_zero() for a in self.w)


class BlockedForm:
    """
    Forma hermitiana no formato de cúspide, sobre um corpo que contém i.

    Raises:
        FormMismatch: se H não tem o formato em blocos ou K não é positiva definida
    """

    def __init__(self, H: HermForm):
        if H.field.n % 4:
            H = H.lift_to(H.field.lift(4))
        N = H.dim
        M = H.mat
        shape_ok = (
            N >= 3
            and M[0, 0].is_zero() and M[N - 1, N - 1].is_zero()
            and M[0, N - 1].is_one() and M[N - 1, 0].is_one()
            and all(M[0, j].is_zero() and M[N - 1, j].is_zero() for j in range(1, N - 1))
        )
        if not shape_ok:
            raise FormMismatch("a forma não tem o formato [[0,0,1],[0,K,0],[1,0,0]]")
        self.H = H
        self.size = N
        self.K = M.submatrix(range(1, N - 1))
        if signature(HermForm(self.K)) != Signature(N - 2, 0, 0):
            raise FormMismatch("o bloco K não é positivo definido")
        self.i = H.field.imaginary_unit()
        self._half = H.field(Fraction(1, 2))

    @classmethod
    def from_hermitian(cls, H: HermForm) -> "BlockedForm":
        return cls(H)

    @property
    def field(self) -> CycField:
        return self.H.field

    @property
    def horizontal_dim(self) -> int:
        return self.size - 2

    # === Produtos ===

    def pairing(self, u: Sequence[CycElem], v: Sequence[CycElem]) -> CycElem:
        """u* K v."""
        return dot(vector_star(u), self.K.apply(v))

    def norm(self, w: Sequence[CycElem]) -> CycElem:
        """w* K w (real, não negativo)."""
        return self.pairing(w, w)

    def imag(self, z: CycElem) -> CycElem:
        """Im(z) como elemento real: (z - conj z)/(2i)."""
        return imag_times_i(z) * (-self.i)

    # === Elementos ===

    def identity(self) -> HeisElem:
        zero = self.field.zero
        return HeisElem(MatC.identity(self.field, self.horizontal_dim), (zero,) * self.horizontal_dim, zero)

    def unipotent(self, w: Sequence, t) -> HeisElem:
        """U(w, t) = P(I, w, t)."""
        return HeisElem(
            MatC.identity(self.field, self.horizontal_dim),
            tuple(self.field(a) for a in w),
            self.field(t),
        )

    def vertical(self, t) -> HeisElem:
        return self.unipotent([0] * self.horizontal_dim, t)

    def reassemble(self, h: HeisElem) -> MatC:
        """A matriz P(B, w, t)."""
        N = self.size
        # linha superior: -w*KB
        wK = tuple(conj(c) for c in self.K.conjugate_transpose().apply(h.w))
        top = [-x for x in (MatC(self.field, [wK]) * h.B).row(0)]
        corner = -(self.norm(h.w) * self._half) + self.i * h.t
        rows = [[self.field.one] + top + [corner]]
        for a in range(N - 2):
            rows.append([self.field.zero] + list(h.B.row(a)) + [h.w[a]])
        rows.append([self.field.zero] * (N - 1) + [self.field.one])
        return MatC(self.field, rows)


def _check_fixes_e0(M: MatC):
    if not all(M[j, 0].is_zero() for j in range(1, M.rows)):
        raise NotCommonFixedPoint("a matriz não fixa a reta de e_0")


def parabolic_decompose(M: MatC, F: BlockedForm) -> HeisElem:
    """
    Decompõe M = P(B, w, t).

    Raises:
        NotParabolicShape: se M não é triangular por blocos
        NotUnipotentCorner: se as entradas de canto não são 1
        FormMismatch: se M não preserva H
    """
    M = M.lift_to(F.field) if M.field != F.field else M
    N = F.size
    if M.shape != (N, N):
        raise NotParabolicShape(f"matriz {M.shape} para forma de dimensão {N}")
    lower_ok = all(M[j, 0].is_zero() for j in range(1, N)) and all(M[N - 1, j].is_zero() for j in range(N - 1))
    if not lower_ok:
        raise NotParabolicShape("a matriz não é triangular por blocos")
    if not (M[0, 0].is_one() and M[N - 1, N - 1].is_one()):
        raise NotUnipotentCorner("entradas de canto diferentes de 1")
    if M.conjugate_transpose() * F.H.mat * M != F.H.mat:
        raise FormMismatch("a matriz não preserva a forma")
    inner = range(1, N - 1)
    B = M.submatrix(inner)
    w = tuple(M[a, N - 1] for a in inner)
    corner = M[0, N - 1]
    t = (corner + F.norm(w) * F._half) * (-F.i)
    h = HeisElem(B, w, t)
    if F.reassemble(h) != M:
        raise FormMismatch("a linha superior não é -w*KB")
    return h


# === Lei de grupo ===

def heis_mul(a: HeisElem, b: HeisElem, F: BlockedForm) -> HeisElem:
    """P(B,w,t)·P(B',w',t') = P(BB', Bw' + w, t + t' + Im(w'*B*Kw))."""
    Bw = a.B.apply(b.w)
    w = tuple(x + y for x, y in zip(Bw, a.w))
    cross = F.pairing(Bw, a.w)
    return HeisElem(a.B * b.B, w, a.t + b.t + F.imag(cross))


def heis_inverse(a: HeisElem, F: BlockedForm) -> HeisElem:
    """P(B⁻¹, -B⁻¹w, -t)."""
    B_inv = a.B.inverse()
    return HeisElem(B_inv, tuple(-x for x in B_inv.apply(a.w)), -a.t)


def heis_commutator(a: HeisElem, b: HeisElem, F: BlockedForm) -> HeisElem:
    """[a, b] = a b a⁻¹ b⁻¹."""
    return heis_mul(heis_mul(a, b, F), heis_mul(heis_inverse(a, F), heis_inverse(b, F), F), F)


def conjugate_scaling(Q: MatC, u: HeisElem, F: BlockedForm) -> HeisElem:
    """
    Decomposição de Q·P(u)·Q⁻¹ para uma isometria Q que fixa a reta de e_0.

    Raises:
        NotIsometryShape: se Q não é triangular por blocos ou não preserva H
    """
    Q = Q.lift_to(F.field) if Q.field != F.field else Q
    N = F.size
    shape_ok = all(Q[j, 0].is_zero() for j in range(1, N)) and all(Q[N - 1, j].is_zero() for j in range(N - 1))
    if not shape_ok or Q.conjugate_transpose() * F.H.mat * Q != F.H.mat:
        raise NotIsometryShape("Q não é uma isometria que fixa e_0")
    return parabolic_decompose(Q * F.reassemble(u) * Q.inverse(), F)


def heis_product(tokens: Sequence[str], named: Mapping[str, HeisElem], F: BlockedForm) -> HeisElem:
    """
    Produto de elementos nomeados na lei de Heisenberg; "-X" é o inverso de X.

    Raises:
        KeyError: se algum nome não está em named
    """
    result = F.identity()
    for token in tokens:
        inverse = token.startswith("-")
        elem = named[token[1:] if inverse else token]
        result = heis_mul(result, heis_inverse(elem, F) if inverse else elem, F)
    return result


@dataclass
class ConjugationCheck:
    """S·T·S⁻¹ calculado pela matriz, contra o produto esperado na lei de grupo."""
    text: str
    lhs: HeisElem
    rhs: HeisElem

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def conjugation_identity(
    conjugator: MatC,
    target: HeisElem,
    product: Sequence[str],
    named: Mapping[str, HeisElem],
    F: BlockedForm,
    text: str = "",
) -> ConjugationCheck:
    """Compara conjugator·target·conjugator⁻¹ com o produto dos elementos nomeados."""
    lhs = conjugate_scaling(conjugator, target, F)
    rhs = heis_product(product, named, F)
    if lhs != rhs:
        logger.warning(f"⚠️ Identidade de conjugação falhou: {text}")
    return ConjugationCheck(text, lhs, rhs)


# === Reticulado de translações ===

@dataclass
class Translation:
    word: str
    element: HeisElem


@dataclass
class CuspProfile:
    form: BlockedForm
    translations: List[Translation]
    vertical_lengths: List[CycElem]
    horizontal_basis: List[Vector]
    horizontal_norms: List[CycElem]
    vertical_generator: Optional[CycElem]
    linear_part_order: int
    words_examined: int = 0
    flags: List[str] = field(default_factory=list)

    @property
    def horizontal_rank(self) -> int:
        return len(self.horizontal_basis)

    def is_complete(self) -> bool:
        return (
            self.horizontal_rank == 2 * self.form.horizontal_dim
            and self.vertical_generator is not None
            and "irrational_vertical_ratio" not in self.flags
        )

    def min_horizontal_norm(self) -> Optional[CycElem]:
        best = None
        for value in self.horizontal_norms:
            if real_sign(value) > 0 and (best is None or real_sign(best - value) > 0):
                best = value
        return best


def _rational(a: CycElem) -> Fraction:
    return a.rational_value()


def _lattice_coordinates(vectors: Sequence[Vector]) -> Tuple[List[List[Fraction]], int]:
    coords = [[Fraction(int(c.numerator), int(c.denominator)) for a in v for c in a.coeffs] for v in vectors]
    denominator = 1
    for row in coords:
        for c in row:
            denominator = int(ilcm(denominator, c.denominator))
    return coords, denominator


def lattice_basis(vectors: Sequence[Vector], field_: CycField) -> List[Vector]:
    """Base Z do Z-módulo gerado pelos vetores, pela forma normal de Hermite."""
    vectors = list(dict.fromkeys(v for v in vectors if any(not a.is_zero() for a in v)))
    if not vectors:
        return []
    size = len(vectors[0])
    coords, denominator = _lattice_coordinates(vectors)
    columns = [[int(c * denominator) for c in row] for row in coords]
    # HNF incremental, em blocos, para não montar matrizes com milhares de colunas
    current: List[List[int]] = []
    for start in range(0, len(columns), 32):
        hnf = hermite_normal_form(Matrix(current + columns[start:start + 32]).T)
        current = [[int(hnf[i, j]) for i in range(hnf.shape[0])] for j in range(hnf.shape[1])]
    dim = field_.basis_dim
    basis = []
    for column in current:
        values = [Fraction(c, denominator) for c in column]
        basis.append(tuple(field_.element(values[k * dim:(k + 1) * dim]) for k in range(size)))
    return basis


def same_lattice(a: Sequence[Vector], b: Sequence[Vector], field_: CycField) -> bool:
    """Dois conjuntos de vetores geram o mesmo Z-módulo (HNF iguais)."""
    return lattice_basis(list(a) + list(b), field_) == lattice_basis(a, field_) == lattice_basis(b, field_)


def _vertical_generator(lengths: Sequence[CycElem]) -> Tuple[Optional[CycElem], bool]:
    """Gerador positivo do grupo de comprimentos verticais; False se há razão irracional."""
    nonzero = [t for t in lengths if not t.is_zero()]
    if not nonzero:
        return None, True
    base = nonzero[0]
    ratios = []
    for t in nonzero:
        r = t / base
        if not r.is_rational():
            return None, False
        ratios.append(_rational(r))
    numerator = 0
    denominator = 1
    for r in ratios:
        numerator = gcd(numerator, r.numerator)
        denominator = int(ilcm(denominator, r.denominator))
    generator = base * Fraction(numerator, denominator)
    if real_sign(generator) < 0:
        generator = -generator
    return generator, True


def translation_lattice(
    generators: Sequence[MatC],
    F: BlockedForm,
    word_len: int = DEFAULT_CUSP_WORD_LEN,
    max_order: int = DEFAULT_MAX_ORDER,
    expected_linear_order: Optional[int] = None,
) -> CuspProfile:
    """
    Enumera elementos de palavras de comprimento <= word_len nos geradores e
    inversos, e extrai as translações, o subgrupo vertical e a parte linear.

    A busca percorre elementos distintos P(B, w, t) em largura; cada elemento
    guarda a primeira palavra que o alcança.

    Raises:
        NotCommonFixedPoint: se algum gerador não fixa e_0
    """
    lifted = [g.lift_to(F.field) if g.field != F.field else g for g in generators]
    for g in lifted:
        _check_fixes_e0(g)
    letters: List[Tuple[Tuple[int, int], HeisElem]] = []
    for index, g in enumerate(lifted, start=1):
        h = parabolic_decompose(g, F)
        letters.append(((index, 1), h))
        letters.append(((index, -1), heis_inverse(h, F)))

    start = F.identity()
    words: Dict[HeisElem, Word] = {start: ()}
    frontier = deque([start])
    examined = 0
    while frontier:
        current = frontier.popleft()
        word = words[current]
        if len(word) >= word_len:
            continue
        for letter, h in letters:
            product = heis_mul(current, h, F)
            examined += 1
            if product not in words:
                words[product] = word + (letter,)
                frontier.append(product)

    translations = [
        Translation(format_word(word), elem)
        for elem, word in words.items()
        if elem.is_translation() and not elem.is_vertical()
    ]
    vertical = [elem.t for elem in words if elem.is_vertical() and not elem.t.is_zero()]
    by_w: Dict[Vector, CycElem] = {}
    for tr in translations:
        w = tr.element.w
        if w in by_w and by_w[w] != tr.element.t:
            vertical.append(tr.element.t - by_w[w])
        by_w.setdefault(w, tr.element.t)
    for i, a in enumerate(translations):
        for b in translations[i + 1:i + 9]:
            c = heis_commutator(a.element, b.element, F)
            if not c.t.is_zero():
                vertical.append(c.t)

    flags: List[str] = []
    generator, commensurable = _vertical_generator(vertical)
    if not commensurable:
        flags.append("irrational_vertical_ratio")
    basis = lattice_basis([tr.element.w for tr in translations], F.field)
    if len(basis) < 2 * F.horizontal_dim:
        flags.append("NotALattice")
        logger.warning(f"⚠️ Translações encontradas geram posto {len(basis)} < {2 * F.horizontal_dim}")

    linear = closure([parabolic_decompose(g, F).B for g in lifted], max_order)
    if expected_linear_order is None or linear.order != expected_linear_order:
        flags.append("lower_bound")

    norms: List[CycElem] = []
    for tr in translations:
        value = F.norm(tr.element.w)
        if value not in norms:
            norms.append(value)
    logger.debug(f"Cúspide: {len(translations)} translações, {examined} produtos, parte linear {linear.order}")
    return CuspProfile(F, translations, vertical, basis, norms, generator, linear.order, examined, flags)


# === Incomensurabilidade ===

@dataclass
class IncommensurabilityVerdict:
    incommensurable: bool
    ratio: CycElem
    rho_a: CycElem
    rho_b: CycElem

    @property
    def label(self) -> str:
        return "INCOMMENSURABLE" if self.incommensurable else "NOT_DISTINGUISHED"


def _rho(profile: CuspProfile) -> CycElem:
    if not profile.is_complete():
        raise IncompleteProfile(f"perfil incompleto: {profile.flags}")
    return profile.vertical_generator / profile.min_horizontal_norm()


def incommensurable_cusps(a: CuspProfile, b: CuspProfile) -> IncommensurabilityVerdict:
    """
    Compara ρ = gerador vertical / menor norma horizontal positiva.

    Um escalar λ que leve uma cúspide na outra multiplica normas horizontais
    e comprimentos verticais pelo mesmo fator λ², então ρ_a/ρ_b racional é
    necessário para comensurabilidade.

    Raises:
        IncompleteProfile: se algum perfil não tem posto máximo ou gerador vertical
    """
    rho_a, rho_b = _rho(a), _rho(b)
    n = a.form.field.n * b.form.field.n // gcd(a.form.field.n, b.form.field.n)
    common = CycField(n)
    ratio = lift_to(rho_a, common) / lift_to(rho_b, common)
    return IncommensurabilityVerdict(not ratio.is_rational(), ratio, rho_a, rho_b)
