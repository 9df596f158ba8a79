"""
Exceções do sistema de verificação de reticulados.

Cada exceção carrega uma ErrorCategory, usada pela CLI para escolher a
mensagem e o código de saída.
"""

from lattice_system.utils.error_messages import ErrorCategory


class LatticeError(Exception):
    """Erro base do sistema."""

    category = ErrorCategory.SYSTEM

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.details = details


# === Aritmética ===

class DivisionByZero(LatticeError, ZeroDivisionError):
    category = ErrorCategory.ARITHMETIC


class IncompatibleFields(LatticeError):
    category = ErrorCategory.ARITHMETIC


class InvalidAutomorphism(LatticeError):
    category = ErrorCategory.ARITHMETIC


class NotReal(LatticeError):
    category = ErrorCategory.ARITHMETIC


class ExpressionError(LatticeError):
    """Expressão do catálogo que não pode ser avaliada no corpo ciclotômico."""
    category = ErrorCategory.CATALOG


# === Álgebra linear ===

class SingularMatrix(LatticeError):
    category = ErrorCategory.ARITHMETIC


class DimensionMismatch(LatticeError, ValueError):
    category = ErrorCategory.ARITHMETIC


class NotHermitian(LatticeError):
    category = ErrorCategory.GEOMETRY


# === Reflexões e apresentações ===

class IsotropicPolarVector(LatticeError):
    category = ErrorCategory.GEOMETRY


class NonUnitMultiplier(LatticeError):
    category = ErrorCategory.GEOMETRY


class MalformedWord(LatticeError):
    category = ErrorCategory.USAGE


# === Catálogo ===

class CatalogFormatError(LatticeError):
    category = ErrorCategory.CATALOG


class UnknownFamily(LatticeError):
    category = ErrorCategory.CATALOG


class DisallowedParams(LatticeError):
    category = ErrorCategory.CATALOG


class MetadataOnlyFamily(LatticeError):
    category = ErrorCategory.CATALOG


class DegenerateParameters(LatticeError):
    category = ErrorCategory.CATALOG


class NoCandidate(LatticeError):
    category = ErrorCategory.CATALOG


class AmbiguousSelection(LatticeError):
    category = ErrorCategory.CATALOG


class NoStratumTable(LatticeError):
    category = ErrorCategory.CATALOG


# === Aritmeticidade e classificação ===

class IntegralityNotEstablished(LatticeError):
    category = ErrorCategory.ARITHMETIC


class Inconclusive(LatticeError):
    category = ErrorCategory.ARITHMETIC


# === Grupos finitos ===

class OrderExceedsBound(LatticeError):
    category = ErrorCategory.GEOMETRY


# === Cúspides ===

class NotParabolicShape(LatticeError):
    category = ErrorCategory.GEOMETRY


class FormMismatch(LatticeError):
    category = ErrorCategory.GEOMETRY


class NotUnipotentCorner(LatticeError):
    category = ErrorCategory.GEOMETRY


class NotIsometryShape(LatticeError):
    category = ErrorCategory.GEOMETRY


class NotCommonFixedPoint(LatticeError):
    category = ErrorCategory.GEOMETRY


class IncompleteProfile(LatticeError):
    category = ErrorCategory.GEOMETRY
