"""
Interseções irredutíveis de espelhos e o invariante κ_L.

κ_L = (Σ_{H ⊃ L} κ_H) / codim L, com κ_H = 1 - 2/p_i para os espelhos da
i-ésima órbita. As cúspides correspondem aos estratos com κ_L = 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from lattice_system.exceptions import CatalogFormatError, NoStratumTable

logger = logging.getLogger("LatticeSystem")

Params = Union[int, Sequence[int]]


@dataclass(frozen=True)
class StratumData:
    """Uma linha das tabelas de estratos: contagem de espelhos por órbita e codimensão."""
    name: str
    counts: Tuple[int, ...]
    codim: int
    printed_kappa: Optional[str] = None

    @property
    def mirror_count(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class StratumTable:
    group: str
    orbit_symbols: Tuple[str, ...]
    rows: Tuple[StratumData, ...]
    complete: bool = True

    def row(self, name: str) -> StratumData:
        for stratum in self.rows:
            if stratum.name == name:
                return stratum
        raise NoStratumTable(f"estrato {name} ausente da tabela de {self.group}")


def parse_strata(raw: Mapping) -> Dict[str, StratumTable]:
    """Tabelas de estratos a partir da seção "strata" do catálogo."""
    tables = {}
    try:
        for group, data in raw.items():
            symbols = tuple(data["orbits"])
            rows = []
            for row in data["rows"]:
                counts = tuple(int(c) for c in row["counts"])
                if len(counts) != len(symbols):
                    raise CatalogFormatError(f"{group}/{row['name']}: {len(counts)} contagens para {len(symbols)} órbitas")
                rows.append(StratumData(row["name"], counts, int(row["codim"]), row.get("kappa")))
            tables[group] = StratumTable(group, symbols, tuple(rows), bool(data.get("complete", True)))
    except (KeyError, TypeError, ValueError) as e:
        raise CatalogFormatError(f"seção strata malformada: {e}") from e
    return tables


def _orbit_orders(stratum: StratumData, params: Params) -> Tuple[int, ...]:
    orders = (params,) if isinstance(params, int) else tuple(params)
    if len(orders) == 1 and len(stratum.counts) > 1:
        orders = orders * len(stratum.counts)
    if len(orders) != len(stratum.counts):
        raise ValueError(f"{len(orders)} parâmetros para {len(stratum.counts)} órbitas de espelhos")
    return orders


def kappa(stratum: StratumData, params: Params) -> Fraction:
    """
    κ_L exato para as ordens de reflexão dadas (p, ou (p1, p2) por órbita).

    Examples:
        G29 com p=3, L_124 (9 espelhos, codim 3): 3·(1 - 2/3) = 1
    """
    orders = _orbit_orders(stratum, params)
    total = sum((count * (1 - Fraction(2, p)) for count, p in zip(stratum.counts, orders)), Fraction(0))
    return total / stratum.codim


def kappa_symbolic(stratum: StratumData, orbit_symbols: Sequence[str] = ("p",)) -> sympy.Expr:
    """κ_L como expressão sympy em p (uma órbita) ou p1, p2 (duas órbitas)."""
    symbols = [sympy.Symbol(name, positive=True, integer=True) for name in orbit_symbols]
    if len(symbols) != len(stratum.counts):
        raise ValueError(f"{len(symbols)} símbolos para {len(stratum.counts)} órbitas")
    total = sum(count * (1 - sympy.Integer(2) / p) for count, p in zip(stratum.counts, symbols))
    return sympy.simplify(total / stratum.codim)


def printed_kappa_matches(stratum: StratumData, orbit_symbols: Sequence[str]) -> bool:
    """Compara a coluna κ impressa no catálogo com kappa_symbolic."""
    if stratum.printed_kappa is None:
        return True
    namespace = {name: sympy.Symbol(name, positive=True, integer=True) for name in orbit_symbols}
    printed = sympy.sympify(stratum.printed_kappa, locals=namespace)
    return sympy.simplify(printed - kappa_symbolic(stratum, orbit_symbols)) == 0


def cusp_strata(tables: Mapping[str, StratumTable], group: str, params: Params) -> List[StratumData]:
    """
    Os estratos tabelados com κ_L = 1.

    Raises:
        NoStratumTable: se o grupo não tem tabela completa de estratos
    """
    table = tables.get(group)
    if table is None or not table.complete:
        raise NoStratumTable(f"sem tabela completa de estratos para {group}")
    found = [stratum for stratum in table.rows if kappa(stratum, params) == 1]
    logger.debug(f"Estratos com κ=1 em {group} {params}: {[s.name for s in found]}")
    return found
