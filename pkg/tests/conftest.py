"""
Fixtures e estratégias compartilhadas pelos testes.
"""

import logging
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lattice_system.algebra.cyclofield import CycField, conj
from lattice_system.algebra.exactlin import HermForm, MatC
from lattice_system.catalog.families import load_catalog

settings.register_profile(
    "lattice",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("lattice")

PROPERTY_EXAMPLES = 1000

FIELD_CONDUCTORS = (3, 4, 5, 8, 12)


# === Estratégias ===

small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def elements(field: CycField, coeffs=small_rationals):
    """Elementos de um corpo fixo com coordenadas racionais pequenas."""
    return st.lists(coeffs, min_size=field.basis_dim, max_size=field.basis_dim).map(field.element)


@st.composite
def field_and_elements(draw, count: int = 3):
    field = CycField(draw(st.sampled_from(FIELD_CONDUCTORS)))
    return (field,) + tuple(draw(elements(field)) for _ in range(count))


def matrices(field: CycField, size: int, coeffs=st.integers(-3, 3)):
    return st.lists(
        st.lists(coeffs, min_size=field.basis_dim, max_size=field.basis_dim).map(field.element),
        min_size=size * size,
        max_size=size * size,
    ).map(lambda entries: MatC(field, [entries[i * size:(i + 1) * size] for i in range(size)]))


@st.composite
def hermitian_forms(draw, field: CycField, size: int):
    """Formas hermitianas com diagonal inteira e triângulo superior qualquer."""
    diagonal = draw(st.lists(st.integers(-3, 3), min_size=size, max_size=size))
    upper = draw(matrices(field, size, st.integers(-2, 2)))
    rows = [[field.zero] * size for _ in range(size)]
    for i in range(size):
        rows[i][i] = field(diagonal[i])
        for j in range(i + 1, size):
            rows[i][j] = upper[i, j]
            rows[j][i] = conj(upper[i, j])
    return HermForm(MatC(field, rows))


@st.composite
def unitriangular(draw, field: CycField, size: int):
    """Matrizes triangulares superiores com diagonal racional não nula (sempre invertíveis)."""
    upper = draw(matrices(field, size, st.integers(-2, 2)))
    diagonal = draw(st.lists(st.sampled_from([1, -1, 2, Fraction(1, 2), 3]), min_size=size, max_size=size))
    rows = [
        [diagonal[i] if i == j else (upper[i, j] if j > i else 0) for j in range(size)]
        for i in range(size)
    ]
    return MatC(field, rows)


# === Fixtures ===

@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture
def q4():
    return CycField(4)


@pytest.fixture
def q12():
    return CycField(12)


@pytest.fixture
def isolated_env(tmp_path, monkeypatch):
    """Diretórios de cache e logs temporários, sem .env."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("LOGS_DIR", str(tmp_path / "logs"))
    for name in ("CHL_WORD_LEN", "CHL_CUSP_WORD_LEN", "CHL_PRECISION_BITS", "CHL_JOBS", "CHL_CATALOG_PATH"):
        monkeypatch.delenv(name, raising=False)
    yield tmp_path
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
