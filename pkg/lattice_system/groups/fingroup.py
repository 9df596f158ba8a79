"""
Fecho finito de grupos de matrizes sobre um corpo ciclotômico.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from lattice_system.algebra.exactlin import MatC
from lattice_system.exceptions import DimensionMismatch, OrderExceedsBound
from lattice_system.groups.reflect import Word, WordEvaluator, parse_word

logger = logging.getLogger("LatticeSystem")

DEFAULT_MAX_ORDER = 10000


@dataclass
class FiniteGroupClosure:
    """Elementos do grupo gerado, cada um com uma palavra testemunha."""
    generators: List[MatC]
    words: Dict[MatC, Word] = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.words)

    @property
    def elements(self) -> List[MatC]:
        return list(self.words)

    def __contains__(self, A: MatC) -> bool:
        return A in self.words

    def __len__(self) -> int:
        return len(self.words)


def closure(generators: Sequence[MatC], max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroupClosure:
    """
    Fecho por busca em largura sob multiplicação à direita pelos geradores.

    Para grupos finitos o monoide gerado coincide com o grupo, então não é
    preciso acrescentar inversas.

    Raises:
        OrderExceedsBound: se o fecho passa de max_order elementos
    """
    if max_order < 1:
        raise ValueError("max_order deve ser >= 1")
    generators = list(generators)
    if not generators:
        raise DimensionMismatch("lista de geradores vazia")
    size = generators[0].rows
    if any(g.shape != (size, size) for g in generators):
        raise DimensionMismatch("geradores de tamanhos diferentes")

    identity = MatC.identity(generators[0].field, size)
    group = FiniteGroupClosure(generators, {identity: ()})
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        word = group.words[current]
        for index, g in enumerate(generators, start=1):
            product = current * g
            if product in group.words:
                continue
            if len(group.words) >= max_order:
                raise OrderExceedsBound(f"fecho excede {max_order} elementos")
            group.words[product] = word + ((index, 1),)
            queue.append(product)
    logger.debug(f"Fecho finito com {group.order} elementos")
    return group


def member(group: FiniteGroupClosure, A: MatC) -> Optional[Word]:
    """Palavra testemunha para A, ou None se A não pertence ao fecho."""
    if group.generators and A.shape != group.generators[0].shape:
        raise DimensionMismatch(f"matriz {A.shape} contra grupo de matrizes {group.generators[0].shape}")
    return group.words.get(A)


def center(group: FiniteGroupClosure) -> FiniteGroupClosure:
    """Subgrupo central; as palavras testemunha seguem nos geradores do grupo original."""
    central = {
        A: word for A, word in group.words.items()
        if all(A * g == g * A for g in group.generators)
    }
    return FiniteGroupClosure(list(group.generators), central)


def element_order(A: MatC, bound: int = DEFAULT_MAX_ORDER) -> Optional[int]:
    """Menor k <= bound com A^k = I, ou None."""
    power = A
    for k in range(1, bound + 1):
        if power.is_identity():
            return k
        power = power * A
    return None


def commutator(A: MatC, B: MatC) -> MatC:
    """[A, B] = A B A⁻¹ B⁻¹."""
    return A * B * A.inverse() * B.inverse()


def verify_identity(generators: Sequence[MatC], left: str, right: str) -> bool:
    """Confere exatamente a igualdade de duas palavras nos geradores."""
    evaluate = WordEvaluator(generators)
    return evaluate(parse_word(left)) == evaluate(parse_word(right))
