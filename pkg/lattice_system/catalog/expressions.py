"""
Expressões do catálogo avaliadas exatamente em Q(ζ_n).

As entradas do catálogo são strings interpretadas por sympy.parse_expr em um
namespace fixo: I, sqrt(d), unity(a, b) = exp(2πi·a/b), conj(x), os parâmetros
inteiros p e q e os símbolos definidos pela família.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Dict, Iterable, Mapping, Optional, Set, Tuple

import sympy
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from lattice_system.algebra.cyclofield import CycElem, CycField, conj, surd_conductor
from lattice_system.exceptions import ExpressionError, IncompatibleFields

logger = logging.getLogger("LatticeSystem")

unity = sympy.Function("unity")

PARAMETER_NAMES = ("p", "q", "p1", "p2")


def _base_namespace() -> Dict[str, object]:
    return {
        "I": sympy.I,
        "sqrt": sympy.sqrt,
        "unity": unity,
        "conj": sympy.conjugate,
    }


@lru_cache(maxsize=4096)
def _parse_cached(text: str, names: Tuple[str, ...], params: Tuple[Tuple[str, int], ...]) -> sympy.Expr:
    namespace = _base_namespace()
    for name in names:
        namespace[name] = sympy.Symbol(name)
    for name, value in params:
        namespace[name] = sympy.Integer(value)
    try:
        return parse_expr(text, local_dict=namespace, transformations=standard_transformations)
    except (SyntaxError, TypeError, ValueError, sympy.SympifyError) as e:
        raise ExpressionError(f"expressão inválida {text!r}: {e}") from e


def parse_expression(
    text,
    names: Iterable[str] = (),
    params: Optional[Mapping[str, int]] = None,
) -> sympy.Expr:
    """
    Interpreta uma expressão do catálogo.

    Args:
        text: Expressão em texto (ou número)
        names: Símbolos definidos pela família
        params: Valores dos parâmetros inteiros (p, q, ...)

    Returns:
        Expressão sympy com os parâmetros substituídos

    Raises:
        ExpressionError: se a expressão não pode ser interpretada
    """
    if isinstance(text, (int, Fraction)):
        return sympy.Rational(text.numerator, text.denominator) if isinstance(text, Fraction) else sympy.Integer(text)
    frozen_params = tuple(sorted((params or {}).items()))
    return _parse_cached(str(text), tuple(sorted(set(names))), frozen_params)


def _integer_arg(value: sympy.Expr, text: str) -> int:
    if not value.is_Integer:
        raise ExpressionError(f"argumento não inteiro {value} em {text}")
    return int(value)


def evaluate(expr: sympy.Expr, field: CycField, env: Callable[[str], CycElem]) -> CycElem:
    """
    Avalia a expressão no corpo dado.

    Args:
        expr: Expressão sympy (de parse_expression)
        field: Corpo de destino
        env: Resolve um símbolo pelo nome

    Raises:
        ExpressionError: construção fora do namespace do catálogo
        IncompatibleFields: se uma raiz da unidade ou surd não pertence ao corpo
    """
    if expr.is_Integer or expr.is_Rational:
        return field(Fraction(int(expr.p), int(expr.q)))
    if expr is sympy.I:
        return field.imaginary_unit()
    if expr.is_Symbol:
        return env(expr.name)
    if expr.is_Add:
        total = field.zero
        for arg in expr.args:
            total = total + evaluate(arg, field, env)
        return total
    if expr.is_Mul:
        product = field.one
        for arg in expr.args:
            product = product * evaluate(arg, field, env)
        return product
    if expr.is_Pow:
        base, exponent = expr.args
        if exponent.is_Integer:
            return evaluate(base, field, env) ** int(exponent)
        if exponent in (sympy.Rational(1, 2), sympy.Rational(-1, 2)) and base.is_Integer:
            root = field.quadratic_surd(int(base))
            return root if exponent > 0 else root.inverse()
        raise ExpressionError(f"potência não suportada: {expr}")
    if isinstance(expr, sympy.conjugate):
        return conj(evaluate(expr.args[0], field, env))
    if expr.func == unity:
        a, b = expr.args
        return field.root_of_unity(_integer_arg(a, str(expr)), _integer_arg(b, str(expr)))
    raise ExpressionError(f"construção não suportada no catálogo: {expr}")


def expression_conductor(expr: sympy.Expr, symbol_conductor: Callable[[str], int] = lambda name: 1) -> int:
    """
    Menor n tal que a expressão vive em Q(ζ_n): mmc dos denominadores de
    unity, dos condutores dos surds e 4 quando I aparece.
    """
    if expr.is_Rational:
        return 1
    if expr is sympy.I:
        return 4
    if expr.is_Symbol:
        return symbol_conductor(expr.name)
    if expr.is_Pow:
        base, exponent = expr.args
        if not exponent.is_Integer and base.is_Integer:
            return surd_conductor(int(base))
    if expr.func == unity:
        a, b = (int(x) for x in expr.args)
        return abs(b) // gcd(a, b)
    n = 1
    for arg in expr.args:
        m = expression_conductor(arg, symbol_conductor)
        n = n * m // gcd(n, m)
    return n


class SymbolTable:
    """
    Definições ordenadas de símbolos, resolvidas sob demanda com detecção de ciclos.

    Args:
        definitions: Nome -> texto da expressão
        params: Valores dos parâmetros inteiros
    """

    def __init__(self, definitions: Mapping[str, str], params: Optional[Mapping[str, int]] = None):
        self.definitions = dict(definitions)
        self.params = dict(params or {})
        for name in self.definitions:
            if name in PARAMETER_NAMES or name in _base_namespace():
                raise ExpressionError(f"símbolo {name!r} colide com um nome reservado")
        self._parsed: Dict[str, sympy.Expr] = {}
        self._conductors: Dict[str, int] = {}

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self.definitions)

    def parse(self, text) -> sympy.Expr:
        return parse_expression(text, self.names, self.params)

    def expression(self, name: str) -> sympy.Expr:
        if name not in self.definitions:
            raise ExpressionError(f"símbolo indefinido: {name}")
        if name not in self._parsed:
            self._parsed[name] = self.parse(self.definitions[name])
        return self._parsed[name]

    def conductor(self, name: str, _stack: Optional[Set[str]] = None) -> int:
        if name in self._conductors:
            return self._conductors[name]
        stack = _stack or set()
        if name in stack:
            raise ExpressionError(f"definição circular envolvendo {name}")
        stack.add(name)
        value = expression_conductor(self.expression(name), lambda other: self.conductor(other, stack))
        stack.discard(name)
        self._conductors[name] = value
        return value

    def conductor_of(self, texts: Iterable) -> int:
        """Condutor conjunto de todos os símbolos e das expressões dadas."""
        n = 1
        for name in self.definitions:
            m = self.conductor(name)
            n = n * m // gcd(n, m)
        for text in texts:
            m = expression_conductor(self.parse(text), self.conductor)
            n = n * m // gcd(n, m)
        return n

    def environment(self, field: CycField) -> "FieldEnvironment":
        return FieldEnvironment(self, field)


class FieldEnvironment:
    """Valores dos símbolos de uma SymbolTable em um corpo fixo."""

    def __init__(self, table: SymbolTable, field: CycField):
        self.table = table
        self.field = field
        self._values: Dict[str, CycElem] = {}
        self._pending: Set[str] = set()

    def __call__(self, name: str) -> CycElem:
        if name in self._values:
            return self._values[name]
        if name in self._pending:
            raise ExpressionError(f"definição circular envolvendo {name}")
        self._pending.add(name)
        try:
            value = evaluate(self.table.expression(name), self.field, self)
        except IncompatibleFields as e:
            raise ExpressionError(f"{name} não pertence a {self.field}: {e}") from e
        finally:
            self._pending.discard(name)
        self._values[name] = value
        return value

    def value(self, text) -> CycElem:
        return evaluate(self.table.parse(text), self.field, self)

    def values(self) -> Dict[str, CycElem]:
        return {name: self(name) for name in self.table.names}
