"""
Catálogo de famílias: dados, expressões simbólicas, estratos e seleção de candidatos.
"""

from .families import (
    Catalog, FamilySpec, GroupInstance, cusp_setup, derive_g28_beta, enumerate_candidates,
    generic_g28_model, instantiate, load_catalog, select_lattice_candidate,
)
from .strata import cusp_strata, kappa

__all__ = [
    'Catalog', 'FamilySpec', 'GroupInstance', 'cusp_setup', 'derive_g28_beta', 'enumerate_candidates',
    'generic_g28_model', 'instantiate', 'load_catalog', 'select_lattice_candidate',
    'cusp_strata', 'kappa',
]
