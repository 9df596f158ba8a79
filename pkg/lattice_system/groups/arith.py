"""
Corpo de traços adjunto, teste de aritmeticidade e classificação de isometrias.

O corpo de traços adjunto é determinado pelo subgrupo S de (Z/n)* que fixa os
valores |tr γ|² de palavras γ nos geradores; o teste de aritmeticidade aplica
cada σ_k com k fora de S à forma hermitiana e exige assinatura definida.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

from sympy import factorint, primefactors, totient

from lattice_system.algebra.cyclofield import CycElem, CycField, conj, galois, lift_to, surd_conductor
from lattice_system.algebra.exactlin import (
    HermForm, MatC, Signature, char_poly, poly_eval_matrix, signature,
)
from lattice_system.algebra.polynomial import (
    FieldPolynomial, cayley_to_real_line, count_real_roots, squarefree_part,
)
from lattice_system.exceptions import (
    FormMismatch, Inconclusive, IntegralityNotEstablished,
)
from lattice_system.groups.reflect import Word, WordEvaluator, format_word, parse_word

logger = logging.getLogger("LatticeSystem")

DEFAULT_FINITE_ORDER_BOUND = 2520


# === Corpo de traços adjunto ===

@dataclass
class TraceFieldResult:
    fixing_exponents: Tuple[int, ...]
    field_descriptor: str
    witnesses: List[Tuple[str, CycElem]]
    conductor: int
    words_examined: int = 0

    @property
    def degree(self) -> int:
        return int(totient(self.conductor)) // len(self.fixing_exponents)


def adjoint_trace(M: MatC) -> CycElem:
    """|tr M|² = tr M · conj(tr M)."""
    t = M.trace()
    return t * conj(t)


def _moved_exponents(value: CycElem, exponents: Set[int]) -> Set[int]:
    return {k for k in exponents if galois(value, k) != value}


def _positive_words(count: int, length: int) -> List[Word]:
    words: List[Word] = [()]
    layer: List[Word] = [()]
    for _ in range(length):
        layer = [w + ((i, 1),) for w in layer for i in range(1, count + 1)]
        words.extend(layer)
    return words[1:]


def adjoint_trace_field(
    generators: Sequence[MatC],
    word_len: int = 4,
    witness_words: Sequence[str] = (),
    jobs: int = 1,
) -> TraceFieldResult:
    """
    Determina o subgrupo de (Z/n)* que fixa |tr γ|² para as palavras testadas.

    As palavras testemunha do catálogo são avaliadas primeiro; depois as
    palavras positivas até word_len, em ordem shortlex. A busca para assim que
    o subgrupo fixador se reduz a {±1}.

    Args:
        generators: Matrizes geradoras
        word_len: Comprimento máximo das palavras enumeradas
        witness_words: Palavras avaliadas antes da enumeração
        jobs: Número de threads para avaliar traços

    Returns:
        TraceFieldResult com expoentes fixadores, descritor e testemunhas
    """
    if word_len < 1:
        raise ValueError("word_len deve ser >= 1")
    field_ = generators[0].field
    n = field_.n
    remaining: Set[int] = set(field_.units())
    floor = {1, n - 1} if n > 2 else {1}
    evaluate = WordEvaluator(generators)
    witnesses: List[Tuple[str, CycElem]] = []
    examined = 0

    def consider(word: Word, value: CycElem, always_record: bool):
        nonlocal remaining
        moved = _moved_exponents(value, remaining)
        if moved or always_record:
            witnesses.append((format_word(word), value))
        remaining -= moved

    for text in witness_words:
        word = parse_word(text)
        consider(word, adjoint_trace(evaluate(word)), True)
        examined += 1

    if field_.basis_dim > 2 and remaining != floor:
        words = _positive_words(len(generators), word_len)
        batch = max(1, jobs) * 16
        for start in range(0, len(words), batch):
            chunk = words[start:start + batch]
            if jobs > 1:
                with ThreadPoolExecutor(max_workers=jobs) as executor:
                    values = list(executor.map(lambda w: adjoint_trace(evaluate(w)), chunk))
            else:
                values = [adjoint_trace(evaluate(w)) for w in chunk]
            for word, value in zip(chunk, values):
                consider(word, value, False)
                examined += 1
                if remaining == floor:
                    break
            if remaining == floor:
                break

    exponents = tuple(sorted(remaining))
    descriptor = describe_fixed_field(field_, exponents)
    logger.debug(f"Corpo de traços: {descriptor} após {examined} palavras")
    return TraceFieldResult(exponents, descriptor, witnesses, n, examined)


def squarefree_candidates(n: int) -> List[int]:
    primes = sorted(set(primefactors(n)) | {2})
    candidates = []
    for r in range(1, len(primes) + 1):
        for combo in combinations(primes, r):
            d = 1
            for p in combo:
                d *= p
            candidates.append(d)
    return sorted(candidates)


def describe_fixed_field(field_: CycField, exponents: Sequence[int]) -> str:
    """
    Nome do corpo fixo do subgrupo {σ_k : k em exponents} de Gal(Q(ζ_n)/Q).

    Returns:
        "Q", "Q(√d)", "Q(cos 2π/m)" ou uma descrição genérica
    """
    n = field_.n
    units = field_.units()
    fixing = set(exponents)
    if fixing == set(units):
        return "Q"
    degree = len(units) // len(fixing)
    if degree == 2:
        for d in squarefree_candidates(n):
            if n % surd_conductor(d):
                continue
            root = field_.quadratic_surd(d)
            if all(galois(root, k) == root for k in fixing):
                return f"Q(√{d})"
    for m in sorted((m for m in range(3, n + 1) if n % m == 0), reverse=True):
        subgroup = {k for k in units if k % m in (1, m - 1)}
        if subgroup == fixing:
            return f"Q(cos 2π/{m})"
    generators = ",".join(str(k) for k in sorted(fixing) if k != 1)
    return f"fixed field of <{generators}> in Q(zeta_{n})"


# === Aritmeticidade ===

@dataclass
class ArithmeticityVerdict:
    arithmetic: bool
    conjugate_signatures: Dict[int, Signature]
    nonarithmeticity_witness: Optional[int] = None
    tested_exponents: Tuple[int, ...] = ()


def check_integrality(generators: Sequence[MatC]):
    """
    Raises:
        IntegralityNotEstablished: se alguma entrada não é inteira algébrica
    """
    for index, M in enumerate(generators, start=1):
        for row in M.entries:
            for a in row:
                if not a.is_algebraic_integer():
                    raise IntegralityNotEstablished(f"entrada não inteira no gerador {index}: {a!r}")


def arithmeticity(
    form: HermForm,
    generators: Sequence[MatC],
    trace_field: TraceFieldResult,
) -> ArithmeticityVerdict:
    """
    Testa definição das formas conjugadas H^σ para σ não trivial no corpo de traços.

    Os expoentes são tomados módulo ±1, pois σ_{-k} = conj ∘ σ_k dá a mesma
    assinatura.
    """
    check_integrality(generators)
    n = form.field.n
    fixing = set(trace_field.fixing_exponents)
    tested = sorted({min(k, n - k) for k in form.field.units() if k not in fixing})
    signatures: Dict[int, Signature] = {1: form.signature()}
    witness = None
    for k in tested:
        sig = signature(form.galois(k))
        signatures[k] = sig
        if witness is None and not sig.is_definite():
            witness = k
    return ArithmeticityVerdict(witness is None, signatures, witness, tuple(tested))


# === Classificação de elementos ===

@dataclass
class ElementClass:
    kind: str
    order: Optional[int] = None
    witnesses: List[CycElem] = field(default_factory=list)

    def __str__(self) -> str:
        if self.kind == "elliptic_finite":
            return f"elliptic_finite({self.order})"
        return self.kind


def _multiplicity(p: FieldPolynomial, root: CycElem) -> int:
    linear = FieldPolynomial(p.field, [-root, 1])
    count = 0
    while p.degree > 0:
        q, r = p.divmod(linear)
        if not r.is_zero():
            break
        p = q
        count += 1
    return count


def _unit_circle_roots(p_sf: FieldPolynomial) -> int:
    """Número de raízes (distintas) de p_sf no círculo unitário."""
    field_ = p_sf.field
    if field_.n % 4:
        big = field_.lift(4)
        p_big = p_sf.map_coeffs(lambda c: lift_to(c, big), big)
    else:
        big, p_big = field_, p_sf
    q = cayley_to_real_line(p_big, big.imaginary_unit())
    q = q * q.leading.inverse()
    if not q.is_real():
        raise Inconclusive("polinômio transformado não é real a menos de escalar")
    at_one = 1 if p_sf(field_.one).is_zero() else 0
    return count_real_roots(q) + at_one


def _strip_order(A: MatC, N: int) -> int:
    order = N
    for ell in factorint(N):
        while order % ell == 0 and (A ** (order // ell)).is_identity():
            order //= ell
    return order


def classify_element(
    A: MatC,
    form: HermForm,
    finite_order_bound: int = DEFAULT_FINITE_ORDER_BOUND,
) -> ElementClass:
    """
    Classifica A em U(H) como elliptic_finite, elliptic_infinite, parabolic ou loxodromic.

    Loxodromia: p_sf, a parte livre de quadrados do polinômio característico,
    tem raiz fora do círculo unitário (contagem de Sturm após a
    transformação de Cayley). Parabolicidade: p_sf(A) != 0. Ordem finita:
    p_sf divide x^N - 1 com N = finite_order_bound.

    Raises:
        FormMismatch: se A*HA != H
        Inconclusive: se a transformação de Cayley não produz polinômio real
    """
    if A.conjugate_transpose() * form.mat * A != form.mat:
        raise FormMismatch("o elemento não preserva a forma")
    p = char_poly(A)
    p_sf = squarefree_part(p)
    if _unit_circle_roots(p_sf) < p_sf.degree:
        return ElementClass("loxodromic")

    if not poly_eval_matrix(p_sf, A).is_zero():
        witnesses = []
        size = A.rows
        identity = MatC.identity(A.field, size)
        for root in A.field.roots_of_unity():
            if not p(root).is_zero():
                continue
            geometric = size - (A - identity * root).rank()
            if geometric < _multiplicity(p, root):
                witnesses.append(root)
        return ElementClass("parabolic", witnesses=witnesses)

    x = FieldPolynomial.x(A.field)
    if x.powmod(finite_order_bound, p_sf) == FieldPolynomial.constant(A.field, 1):
        return ElementClass("elliptic_finite", _strip_order(A, finite_order_bound))
    return ElementClass("elliptic_infinite")
