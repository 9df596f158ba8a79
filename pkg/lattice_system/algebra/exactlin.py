"""
Álgebra linear exata e densa sobre um corpo ciclotômico.

Matrizes são imutáveis (tuplas de linhas de CycElem). A assinatura de formas
hermitianas é calculada por LDL* pivotado, com sinais dos pivôs certificados
por real_sign; um oráculo numérico independente (mpmath.eighe) serve para
conferência.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import mpmath

from lattice_system.algebra.cyclofield import (
    CycElem, CycField, conj, galois, lift_to, real_sign, to_complex,
)
from lattice_system.algebra.polynomial import FieldPolynomial
from lattice_system.exceptions import DimensionMismatch, NotHermitian, SingularMatrix

logger = logging.getLogger("LatticeSystem")

Vector = Tuple[CycElem, ...]


class MatC:
    """Matriz densa sobre um CycField."""

    __slots__ = ("field", "rows", "cols", "entries", "_hash")

    def __init__(self, field: CycField, data: Sequence[Sequence]):
        entries = tuple(tuple(field(x) for x in row) for row in data)
        cols = len(entries[0]) if entries else 0
        if any(len(row) != cols for row in entries):
            raise DimensionMismatch("linhas de comprimentos diferentes")
        self.field = field
        self.rows = len(entries)
        self.cols = cols
        self.entries = entries
        self._hash = None

    # === Construtores ===

    @classmethod
    def identity(cls, field: CycField, n: int) -> "MatC":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: CycField, rows: int, cols: int) -> "MatC":
        return cls(field, [[0] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, field: CycField, values: Sequence) -> "MatC":
        n = len(values)
        return cls(field, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, field: CycField, columns: Sequence[Sequence]) -> "MatC":
        return cls(field, [list(row) for row in zip(*columns)])

    @classmethod
    def column(cls, field: CycField, vector: Sequence) -> "MatC":
        return cls(field, [[x] for x in vector])

    # === Acesso ===

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> CycElem:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def to_lists(self) -> List[List[CycElem]]:
        return [list(row) for row in self.entries]

    # === Aritmética ===

    def _same_shape(self, other: "MatC"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"formas {self.shape} e {other.shape}")

    def __add__(self, other: "MatC") -> "MatC":
        self._same_shape(other)
        return MatC(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "MatC") -> "MatC":
        self._same_shape(other)
        return MatC(self.field, [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self) -> "MatC":
        return MatC(self.field, [[-a for a in r] for r in self.entries])

    def __mul__(self, other) -> "MatC":
        if not isinstance(other, MatC):
            c = self.field(other)
            return MatC(self.field, [[a * c for a in r] for r in self.entries])
        if self.cols != other.rows:
            raise DimensionMismatch(f"produto {self.shape} x {other.shape}")
        zero = self.field.zero
        other_cols = [other.col(j) for j in range(other.cols)]
        result = []
        for r in self.entries:
            out_row = []
            for c in other_cols:
                total = zero
                for a, b in zip(r, c):
                    if not a.is_zero() and not b.is_zero():
                        total = total + a * b
                out_row.append(total)
            result.append(out_row)
        return MatC(self.field, result)

    __matmul__ = __mul__

    def __rmul__(self, other) -> "MatC":
        return self * other

    def apply(self, vector: Sequence[CycElem]) -> Vector:
        """Produto matriz-vetor."""
        if len(vector) != self.cols:
            raise DimensionMismatch(f"vetor de tamanho {len(vector)} para matriz {self.shape}")
        zero = self.field.zero
        out = []
        for r in self.entries:
            total = zero
            for a, b in zip(r, vector):
                if not a.is_zero() and not b.is_zero():
                    total = total + a * b
            out.append(total)
        return tuple(out)

    def __pow__(self, exponent: int) -> "MatC":
        if not self.is_square():
            raise DimensionMismatch("potência de matriz não quadrada")
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = MatC.identity(self.field, self.rows)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def transpose(self) -> "MatC":
        return MatC(self.field, [self.col(j) for j in range(self.cols)])

    def conjugate_transpose(self) -> "MatC":
        return MatC(self.field, [[conj(a) for a in self.col(j)] for j in range(self.cols)])

    star = conjugate_transpose

    def map(self, fn: Callable[[CycElem], CycElem], field: Optional[CycField] = None) -> "MatC":
        return MatC(field or self.field, [[fn(a) for a in r] for r in self.entries])

    def lift_to(self, field: CycField) -> "MatC":
        """A mesma matriz com entradas levadas a um corpo maior."""
        if field == self.field:
            return self
        return self.map(lambda a: lift_to(a, field), field)

    # === Igualdade ===

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatC):
            return NotImplemented
        return self.field == other.field and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.entries))
        return self._hash

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.entries for a in r)

    def is_identity(self) -> bool:
        return self.is_square() and all(
            (a.is_one() if i == j else a.is_zero())
            for i, r in enumerate(self.entries) for j, a in enumerate(r)
        )

    def __repr__(self) -> str:
        return f"MatC({self.field}, {self.rows}x{self.cols})"

    # === Eliminação ===

    def _echelon(self) -> Tuple[List[List[CycElem]], List[int]]:
        """Forma escalonada reduzida por linhas e colunas pivô."""
        A = self.to_lists()
        pivots: List[int] = []
        r = 0
        for c in range(self.cols):
            pivot = next((i for i in range(r, self.rows) if not A[i][c].is_zero()), None)
            if pivot is None:
                continue
            A[r], A[pivot] = A[pivot], A[r]
            inv = A[r][c].inverse()
            A[r] = [a * inv for a in A[r]]
            for i in range(self.rows):
                if i != r and not A[i][c].is_zero():
                    factor = A[i][c]
                    A[i] = [a - factor * b for a, b in zip(A[i], A[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return A, pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def kernel(self) -> List[Vector]:
        """Base exata do núcleo {x : A x = 0}."""
        R, pivots = self._echelon()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        zero, one = self.field.zero, self.field.one
        for f in free:
            x = [zero] * self.cols
            x[f] = one
            for row, p in enumerate(pivots):
                x[p] = -R[row][f]
            basis.append(tuple(x))
        return basis

    def inverse(self) -> "MatC":
        """
        Inversa por Gauss-Jordan.

        Raises:
            SingularMatrix: se a matriz não é invertível
        """
        if not self.is_square():
            raise DimensionMismatch("inversa de matriz não quadrada")
        n = self.rows
        augmented = MatC(self.field, [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.entries)])
        R, pivots = augmented._echelon()
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise SingularMatrix("matriz singular")
        return MatC(self.field, [row[n:] for row in R])

    def det(self) -> CycElem:
        """Determinante por eliminação sem frações (Bareiss)."""
        if not self.is_square():
            raise DimensionMismatch("determinante de matriz não quadrada")
        n = self.rows
        if n == 0:
            return self.field.one
        A = self.to_lists()
        sign = 1
        previous = self.field.one
        for k in range(n - 1):
            if A[k][k].is_zero():
                swap = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
                if swap is None:
                    return self.field.zero
                A[k], A[swap] = A[swap], A[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / previous
            previous = A[k][k]
        return A[n - 1][n - 1] if sign > 0 else -A[n - 1][n - 1]

    def trace(self) -> CycElem:
        total = self.field.zero
        for i in range(min(self.rows, self.cols)):
            total = total + self.entries[i][i]
        return total

    def submatrix(self, rows: Sequence[int], cols: Optional[Sequence[int]] = None) -> "MatC":
        """Submatriz nas linhas e colunas dadas (índices a partir de 0)."""
        cols = rows if cols is None else cols
        return MatC(self.field, [[self.entries[i][j] for j in cols] for i in rows])


# === Funções sobre matrizes ===

def galois_matrix(A: MatC, k: int) -> MatC:
    """Aplica σ_k entrada a entrada."""
    return A.map(lambda a: galois(a, k))


def is_hermitian(A: MatC) -> bool:
    return A.is_square() and A == A.conjugate_transpose()


def char_poly(A: MatC) -> FieldPolynomial:
    """
    Polinômio característico det(xI - A) por Faddeev-LeVerrier.

    Returns:
        Polinômio mônico de grau n
    """
    if not A.is_square():
        raise DimensionMismatch("polinômio característico de matriz não quadrada")
    n = A.rows
    field = A.field
    identity = MatC.identity(field, n)
    coeffs = [field.zero] * (n + 1)
    coeffs[n] = field.one
    M = MatC.zeros(field, n, n)
    for k in range(1, n + 1):
        M = A * M + identity * coeffs[n - k + 1]
        coeffs[n - k] = -(A * M).trace() / k
    return FieldPolynomial(field, coeffs)


def poly_eval_matrix(f: FieldPolynomial, A: MatC) -> MatC:
    """f(A) por Horner."""
    n = A.rows
    result = MatC.zeros(A.field, n, n)
    identity = MatC.identity(A.field, n)
    for c in reversed(f.coeffs):
        result = result * A + identity * c
    return result


def vector_star(x: Sequence[CycElem]) -> Vector:
    return tuple(conj(a) for a in x)


def dot(x: Sequence[CycElem], y: Sequence[CycElem]) -> CycElem:
    """Σ x_i y_i (sem conjugação)."""
    total = None
    for a, b in zip(x, y):
        term = a * b
        total = term if total is None else total + term
    return total


# === Formas hermitianas ===

class Signature(NamedTuple):
    """Inércia (positivos, negativos, nulos)."""
    pos: int
    neg: int
    zero: int

    @property
    def dim(self) -> int:
        return self.pos + self.neg + self.zero

    def is_definite(self) -> bool:
        return self.zero == 0 and (self.pos == 0 or self.neg == 0)

    def is_degenerate(self) -> bool:
        return self.zero > 0

    def __str__(self) -> str:
        if self.zero:
            return f"({self.pos},{self.neg},{self.zero})"
        return f"({self.pos},{self.neg})"


@dataclass
class HermForm:
    """
    Forma hermitiana dada por sua matriz de Gram.

    Raises:
        NotHermitian: se mat não coincide com sua transposta conjugada
    """
    mat: MatC
    signature_cache: Optional[Signature] = dataclass_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not is_hermitian(self.mat):
            raise NotHermitian("a matriz da forma não é hermitiana")

    @property
    def field(self) -> CycField:
        return self.mat.field

    @property
    def dim(self) -> int:
        return self.mat.rows

    def pairing(self, x: Sequence[CycElem], y: Sequence[CycElem]) -> CycElem:
        return gram_pairing(self, x, y)

    def signature(self) -> Signature:
        if self.signature_cache is None:
            self.signature_cache = signature(self)
        return self.signature_cache

    def galois(self, k: int) -> "HermForm":
        return HermForm(galois_matrix(self.mat, k))

    def restrict(self, indices: Sequence[int]) -> "HermForm":
        """Subforma principal nos índices dados (a partir de 0)."""
        return HermForm(self.mat.submatrix(indices))

    def lift_to(self, field: CycField) -> "HermForm":
        return HermForm(self.mat.lift_to(field))


def gram_pairing(H: HermForm, x: Sequence[CycElem], y: Sequence[CycElem]) -> CycElem:
    """⟨x, y⟩ = y*·H·x (linear na primeira entrada)."""
    if len(x) != H.dim or len(y) != H.dim:
        raise DimensionMismatch(f"vetores de tamanhos {len(x)}, {len(y)} para forma de dimensão {H.dim}")
    return dot(vector_star(y), H.mat.apply(x))


def signature(H: HermForm) -> Signature:
    """
    Inércia exata por LDL* pivotado.

    Um pivô diagonal não nulo contribui com seu sinal e é eliminado por
    complemento de Schur. Se toda a diagonal ativa é nula mas há uma entrada
    A_ij ≠ 0, a congruência e_i ↦ e_i + conj(A_ij)·e_j cria o pivô 2|A_ij|².
    Um bloco nulo conta como zeros.
    """
    A = H.mat.to_lists()
    active = list(range(H.dim))
    pos = neg = zero = 0
    while active:
        pivot = next((i for i in active if not A[i][i].is_zero()), None)
        if pivot is None:
            pair = next(((i, j) for i in active for j in active if i != j and not A[i][j].is_zero()), None)
            if pair is None:
                zero += len(active)
                break
            i, j = pair
            t = conj(A[i][j])
            t_bar = A[i][j]
            for r in active:
                A[r][i] = A[r][i] + A[r][j] * t
            for c in active:
                A[i][c] = A[i][c] + t_bar * A[j][c]
            pivot = i
        d = A[pivot][pivot]
        if real_sign(d) > 0:
            pos += 1
        else:
            neg += 1
        active.remove(pivot)
        inv = d.inverse()
        for r in active:
            if A[r][pivot].is_zero():
                continue
            factor = A[r][pivot] * inv
            for c in active:
                if not A[pivot][c].is_zero():
                    A[r][c] = A[r][c] - factor * A[pivot][c]
    return Signature(pos, neg, zero)


def invariant_hermitian_form(generators: Sequence[MatC]) -> HermForm:
    """
    A forma hermitiana preservada por todos os geradores, normalizada.

    Resolve R*·X·R = X como sistema linear nas n² entradas de X. Exige
    solução única a menos de escalar; a primeira entrada diagonal não nula
    é normalizada para 1.

    Raises:
        NotHermitian: se não há forma invariante única e hermitiana
    """
    n = generators[0].rows
    field = generators[0].field
    equations = []
    for R in generators:
        Rc = R.map(conj)
        for i in range(n):
            for j in range(n):
                row = []
                for k in range(n):
                    for l in range(n):
                        value = Rc[k, i] * R[l, j]
                        if k == i and l == j:
                            value = value - 1
                        row.append(value)
                equations.append(row)
    solutions = MatC(field, equations).kernel()
    if len(solutions) != 1:
        raise NotHermitian(f"espaço de formas invariantes de dimensão {len(solutions)}")
    x = solutions[0]
    X = MatC(field, [x[i * n:(i + 1) * n] for i in range(n)])
    scale = next((X[i, i] for i in range(n) if not X[i, i].is_zero()), None)
    if scale is None:
        raise NotHermitian("forma invariante com diagonal nula")
    X = X * scale.inverse()
    logger.debug(f"Forma invariante resolvida em dimensão {n} sobre {field}")
    return HermForm(X)


def numeric_signature(H: HermForm, precision_bits: int = 128) -> Signature:
    """
    Oráculo: contagem de autovalores do mergulho numérico (mpmath.eighe).

    Autovalores com módulo abaixo de 2^(-precision_bits/2) vezes a norma
    contam como nulos.
    """
    n = H.dim
    with mpmath.workprec(precision_bits):
        M = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                M[i, j] = to_complex(H.mat[i, j], precision_bits)
        eigenvalues = mpmath.eighe(M, eigvals_only=True)
        scale = max([mpmath.fabs(e) for e in eigenvalues] + [mpmath.mpf(1)])
        tolerance = scale * mpmath.mpf(2) ** (-(precision_bits // 2))
        pos = sum(1 for e in eigenvalues if e > tolerance)
        neg = sum(1 for e in eigenvalues if e < -tolerance)
    return Signature(pos, neg, n - pos - neg)
