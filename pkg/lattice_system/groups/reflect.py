"""
Reflexões complexas, relações de trança e verificação de apresentações.

Palavras são tuplas de pares (índice do gerador a partir de 1, expoente ±1).
No formato texto uma palavra é "1 2 -3"; as relações são uma por linha:

    br k: i j          relação de trança de comprimento k entre R_i e R_j
    br k: 3 ; 2 4      trança entre as palavras "3" e "2 4"
    pow m: w           w^m = I
    eq: w1 = w2 = w3   palavras iguais
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from lattice_system.algebra.cyclofield import CycElem, conj
from lattice_system.algebra.exactlin import HermForm, MatC, gram_pairing
from lattice_system.exceptions import (
    DimensionMismatch, IsotropicPolarVector, MalformedWord, NonUnitMultiplier,
)

logger = logging.getLogger("LatticeSystem")

Word = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class Reflection:
    """Reflexão complexa com vetor polar v e multiplicador z."""
    matrix: MatC
    polar: Tuple[CycElem, ...]
    multiplier: CycElem
    form: HermForm


def reflection(H: HermForm, v: Sequence[CycElem], z: CycElem) -> Reflection:
    """
    R = I + (z - 1)·v·(v*H)/⟨v,v⟩, isto é, R x = x + (z - 1)⟨x,v⟩/⟨v,v⟩ v.

    Raises:
        IsotropicPolarVector: se ⟨v,v⟩ = 0
        NonUnitMultiplier: se z·conj(z) != 1
    """
    field = H.field
    v = tuple(field(a) for a in v)
    z = field(z)
    if len(v) != H.dim:
        raise DimensionMismatch(f"vetor polar de tamanho {len(v)} para forma de dimensão {H.dim}")
    if not (z * conj(z)).is_one():
        raise NonUnitMultiplier(f"multiplicador {z!r} não tem módulo 1")
    norm = gram_pairing(H, v, v)
    if norm.is_zero():
        raise IsotropicPolarVector("vetor polar isotrópico")
    # linha v*H: coeficiente de x em ⟨x,v⟩
    covector = H.mat.conjugate_transpose().apply(v)
    covector = tuple(conj(c) for c in covector)
    scale = (z - 1) / norm
    rows = []
    for a in range(H.dim):
        factor = v[a] * scale
        rows.append([(1 if a == b else 0) + factor * covector[b] for b in range(H.dim)])
    return Reflection(MatC(field, rows), v, z, H)


def reflection_from_matrix(M: MatC, H: HermForm) -> Reflection:
    """
    Recupera vetor polar e multiplicador de uma matriz de reflexão dada.

    O vetor polar é uma coluna não nula de M - I e o multiplicador é
    1 + tr(M - I).
    """
    D = M - MatC.identity(M.field, M.rows)
    polar = next((D.col(j) for j in range(D.cols) if any(not a.is_zero() for a in D.col(j))), None)
    if polar is None:
        raise IsotropicPolarVector("a matriz identidade não é uma reflexão")
    multiplier = D.trace() + 1
    rebuilt = reflection(H, polar, multiplier)
    if rebuilt.matrix != M:
        raise NonUnitMultiplier("a matriz não é uma reflexão para esta forma")
    return rebuilt


# === Tranças ===

def _alternating(A: MatC, B: MatC, k: int) -> MatC:
    result = MatC.identity(A.field, A.rows)
    for step in range(k):
        result = result * (A if step % 2 == 0 else B)
    return result


def braid_holds(A: MatC, B: MatC, k: int) -> bool:
    """ABA... = BAB... com k fatores de cada lado."""
    if A.shape != B.shape or not A.is_square():
        raise DimensionMismatch(f"matrizes {A.shape} e {B.shape}")
    if k < 1:
        raise ValueError("comprimento de trança deve ser >= 1")
    return _alternating(A, B, k) == _alternating(B, A, k)


def braid_length(A: MatC, B: MatC, k_max: int = 12) -> Optional[int]:
    """Menor k em [2, k_max] com braid_holds(A, B, k), ou None."""
    if A == B:
        logger.warning("⚠️ Geradores idênticos: comprimento de trança reportado como 2")
        return 2
    for k in range(2, k_max + 1):
        if braid_holds(A, B, k):
            return k
    return None


# === Palavras e relações ===

def parse_word(text: str) -> Word:
    """
    "1 2 -3" -> ((1, 1), (2, 1), (3, -1)).

    Raises:
        MalformedWord: se algum símbolo não é um inteiro não nulo
    """
    letters = []
    for token in text.replace(",", " ").split():
        try:
            value = int(token)
        except ValueError as e:
            raise MalformedWord(f"símbolo inválido {token!r} em {text!r}") from e
        if value == 0:
            raise MalformedWord(f"gerador 0 em {text!r}")
        letters.append((abs(value), 1 if value > 0 else -1))
    if not letters:
        raise MalformedWord("palavra vazia")
    return tuple(letters)


def format_word(word: Word) -> str:
    return " ".join(str(i if e > 0 else -i) for i, e in word)


def inverse_word(word: Word) -> Word:
    return tuple((i, -e) for i, e in reversed(word))


@dataclass(frozen=True)
class BraidRel:
    left: Word
    right: Word
    k: int

    def __str__(self) -> str:
        if len(self.left) == 1 and len(self.right) == 1:
            return f"br {self.k}: {format_word(self.left)} {format_word(self.right)}"
        return f"br {self.k}: {format_word(self.left)} ; {format_word(self.right)}"


@dataclass(frozen=True)
class PowerRel:
    word: Word
    m: int

    def __str__(self) -> str:
        return f"pow {self.m}: {format_word(self.word)}"


@dataclass(frozen=True)
class EqualRel:
    words: Tuple[Word, ...]

    def __str__(self) -> str:
        return "eq: " + " = ".join(format_word(w) for w in self.words)


Relation = Union[BraidRel, PowerRel, EqualRel]


def parse_relation(line: str) -> Relation:
    """Interpreta uma linha do formato texto de apresentações."""
    head, sep, body = line.partition(":")
    if not sep:
        raise MalformedWord(f"relação sem ':' em {line!r}")
    parts = head.split()
    kind = parts[0] if parts else ""
    try:
        if kind == "br":
            k = int(parts[1])
            if ";" in body:
                left, right = body.split(";")
                return BraidRel(parse_word(left), parse_word(right), k)
            tokens = body.split()
            if len(tokens) != 2:
                raise MalformedWord(f"trança exige dois geradores em {line!r}")
            return BraidRel(parse_word(tokens[0]), parse_word(tokens[1]), k)
        if kind == "pow":
            return PowerRel(parse_word(body), int(parts[1]))
        if kind == "eq":
            words = tuple(parse_word(w) for w in body.split("="))
            if len(words) < 2:
                raise MalformedWord(f"igualdade com uma só palavra em {line!r}")
            return EqualRel(words)
    except (IndexError, ValueError) as e:
        raise MalformedWord(f"relação malformada {line!r}: {e}") from e
    raise MalformedWord(f"tipo de relação desconhecido em {line!r}")


def parse_relations(lines: Sequence[str]) -> List[Relation]:
    return [parse_relation(line) for line in lines if line.strip() and not line.strip().startswith("#")]


def relation_words(rel: Relation) -> List[Word]:
    if isinstance(rel, BraidRel):
        return [rel.left, rel.right]
    if isinstance(rel, PowerRel):
        return [rel.word]
    return list(rel.words)


class WordEvaluator:
    """Avalia palavras nos geradores, com inversas calculadas uma única vez."""

    def __init__(self, generators: Sequence[MatC]):
        if not generators:
            raise MalformedWord("lista de geradores vazia")
        self.generators = list(generators)
        self._inverses: Dict[int, MatC] = {}
        self.identity = MatC.identity(generators[0].field, generators[0].rows)

    def letter(self, index: int, exponent: int) -> MatC:
        if not 1 <= index <= len(self.generators):
            raise MalformedWord(f"gerador {index} fora de 1..{len(self.generators)}")
        if exponent > 0:
            return self.generators[index - 1]
        if index not in self._inverses:
            self._inverses[index] = self.generators[index - 1].inverse()
        return self._inverses[index]

    def __call__(self, word: Word) -> MatC:
        result = self.identity
        for index, exponent in word:
            result = result * self.letter(index, exponent)
        return result


def word_matrix(generators: Sequence[MatC], word: Union[Word, str]) -> MatC:
    if isinstance(word, str):
        word = parse_word(word)
    return WordEvaluator(generators)(word)


# === Verificação de apresentações ===

@dataclass
class RelationResult:
    index: int
    relation: Relation
    passed: bool
    difference: Optional[MatC] = None


@dataclass
class PresentationReport:
    results: List[RelationResult]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def first_failure(self) -> Optional[RelationResult]:
        return next((r for r in self.results if not r.passed), None)

    @property
    def failures(self) -> int:
        return sum(1 for r in self.results if not r.passed)


def check_relation(evaluate: WordEvaluator, rel: Relation) -> Tuple[bool, Optional[MatC]]:
    """Testa uma relação; em caso de falha devolve a matriz diferença."""
    if isinstance(rel, BraidRel):
        A, B = evaluate(rel.left), evaluate(rel.right)
        left, right = _alternating(A, B, rel.k), _alternating(B, A, rel.k)
    elif isinstance(rel, PowerRel):
        left, right = evaluate(rel.word) ** rel.m, evaluate.identity
    else:
        matrices = [evaluate(w) for w in rel.words]
        left = matrices[0]
        right = next((M for M in matrices[1:] if M != left), left)
    if left == right:
        return True, None
    return False, left - right


def verify_presentation(
    generators: Sequence[MatC],
    relations: Sequence[Union[Relation, str]],
    jobs: int = 1,
) -> PresentationReport:
    """
    Verifica cada relação exatamente nas matrizes dadas.

    Args:
        generators: Matrizes R_1, ..., R_m
        relations: Relações (objetos ou linhas de texto)
        jobs: Número de threads

    Returns:
        PresentationReport na ordem das relações
    """
    parsed = [parse_relation(r) if isinstance(r, str) else r for r in relations]
    evaluate = WordEvaluator(generators)
    for rel in parsed:
        for word in relation_words(rel):
            for index, _ in word:
                evaluate.letter(index, 1)

    if jobs > 1 and len(parsed) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(check_relation, evaluate, rel) for rel in parsed]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [check_relation(evaluate, rel) for rel in parsed]

    results = [
        RelationResult(index, rel, passed, difference)
        for index, (rel, (passed, difference)) in enumerate(zip(parsed, outcomes))
    ]
    report = PresentationReport(results)
    if report.all_passed:
        logger.debug(f"Apresentação verificada: {len(results)} relações")
    else:
        logger.debug(f"Primeira relação falha: {report.first_failure.relation}")
    return report
