"""
Grupos gerados por reflexões: apresentações, grupos finitos,
aritmeticidade e cúspides.
"""

from .arith import adjoint_trace_field, arithmeticity, check_integrality, classify_element
from .cusp import BlockedForm, CuspProfile, HeisElem, incommensurable_cusps, parabolic_decompose, translation_lattice
from .fingroup import FiniteGroupClosure, closure, element_order
from .reflect import Reflection, reflection, verify_presentation, word_matrix

__all__ = [
    'adjoint_trace_field', 'arithmeticity', 'check_integrality', 'classify_element',
    'BlockedForm', 'CuspProfile', 'HeisElem', 'incommensurable_cusps', 'parabolic_decompose', 'translation_lattice',
    'FiniteGroupClosure', 'closure', 'element_order',
    'Reflection', 'reflection', 'verify_presentation', 'word_matrix',
]
