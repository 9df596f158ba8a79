"""
Álgebra exata: corpos ciclotômicos, polinômios e matrizes sobre Q(ζ_n).
"""

from .cyclofield import CycElem, CycField, GaloisAut, approx, common_field, conj, galois, lift
from .exactlin import HermForm, MatC, Signature, invariant_hermitian_form, signature
from .polynomial import FieldPolynomial, count_real_roots, squarefree_part

__all__ = [
    'CycElem', 'CycField', 'GaloisAut', 'approx', 'common_field', 'conj', 'galois', 'lift',
    'HermForm', 'MatC', 'Signature', 'invariant_hermitian_form', 'signature',
    'FieldPolynomial', 'count_real_roots', 'squarefree_part',
]
