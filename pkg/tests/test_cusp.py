import pytest

from lattice_system.algebra.cyclofield import CycField
from lattice_system.algebra.exactlin import HermForm, MatC
from lattice_system.catalog.families import cusp_setup
from lattice_system.exceptions import (
    FormMismatch, IncompleteProfile, NotIsometryShape, NotParabolicShape, NotUnipotentCorner,
)
from lattice_system.groups.cusp import (
    BlockedForm, HeisElem, conjugate_scaling, conjugation_identity, heis_commutator, heis_inverse,
    heis_mul, heis_product, incommensurable_cusps, parabolic_decompose, same_lattice, translation_lattice,
)
from lattice_system.groups.fingroup import center, closure, verify_identity
from lattice_system.groups.reflect import word_matrix


def _blocked(field: CycField) -> BlockedForm:
    return BlockedForm(HermForm(MatC(field, [[0, 0, 1], [0, 1, 0], [1, 0, 0]])))


def _profile(field: CycField, second, word_len: int = 4, expected_linear_order=1):
    F = _blocked(field)
    gens = [F.reassemble(F.unipotent([1], 0)), F.reassemble(F.unipotent([second], 0))]
    return translation_lattice(gens, F, word_len=word_len, expected_linear_order=expected_linear_order)


def test_blocked_form_shape_checks():
    with pytest.raises(FormMismatch):
        BlockedForm(HermForm(MatC.diagonal(CycField(4), [1, 1, -1])))
    with pytest.raises(FormMismatch):
        BlockedForm(HermForm(MatC(CycField(4), [[0, 0, 1], [0, -1, 0], [1, 0, 0]])))


def test_blocked_form_lifts_to_field_with_i():
    F = BlockedForm.from_hermitian(HermForm(MatC(CycField(3), [[0, 0, 1], [0, 1, 0], [1, 0, 0]])))
    assert F.field.n == 12
    assert F.horizontal_dim == 1


def test_reassemble_and_decompose(q4):
    F = _blocked(q4)
    i = q4.imaginary_unit()
    h = F.unipotent([1 + i], 3)
    M = F.reassemble(h)
    assert M.conjugate_transpose() * F.H.mat * M == F.H.mat
    assert parabolic_decompose(M, F) == h
    assert h.is_translation() and not h.is_vertical()
    assert F.vertical(5).is_vertical()


def test_decompose_errors(q4):
    F = _blocked(q4)
    with pytest.raises(NotParabolicShape):
        parabolic_decompose(MatC(q4, [[1, 0, 0], [1, 1, 0], [0, 0, 1]]), F)
    with pytest.raises(NotParabolicShape):
        parabolic_decompose(MatC.identity(q4, 4), F)
    with pytest.raises(NotUnipotentCorner):
        parabolic_decompose(MatC.diagonal(q4, [-1, 1, -1]), F)
    with pytest.raises(FormMismatch):
        parabolic_decompose(MatC.diagonal(q4, [1, 2, 1]), F)


def test_group_law_matches_matrix_product(q4):
    F = _blocked(q4)
    i = q4.imaginary_unit()
    a = F.unipotent([1 + i], 2)
    b = F.unipotent([i], -1)
    assert F.reassemble(heis_mul(a, b, F)) == F.reassemble(a) * F.reassemble(b)
    assert heis_mul(a, heis_inverse(a, F), F) == F.identity()


def test_commutator_of_translations_is_vertical(q4):
    F = _blocked(q4)
    a = F.unipotent([1], 0)
    b = F.unipotent([q4.imaginary_unit()], 0)
    c = heis_commutator(a, b, F)
    assert c.is_vertical()
    assert c.t == -2


def test_conjugate_scaling(q4):
    F = _blocked(q4)
    i = q4.imaginary_unit()
    scaling = MatC.diagonal(q4, [2, 1, q4(1) / 2])
    assert conjugate_scaling(scaling, F.unipotent([i], 1), F) == F.unipotent([2 * i], 4)
    with pytest.raises(NotIsometryShape):
        conjugate_scaling(MatC.diagonal(q4, [2, 1, 1]), F.unipotent([i], 1), F)


def test_same_lattice(q4):
    i = q4.imaginary_unit()
    assert same_lattice([(q4.one,), (i,)], [(1 + i,), (q4.one,)], q4)
    assert not same_lattice([(q4.one,), (i,)], [(1 + i,), (1 - i,)], q4)


def test_translation_lattice_of_gaussian_integers(q4):
    profile = _profile(q4, q4.imaginary_unit())
    assert profile.vertical_generator == 2
    assert profile.horizontal_rank == 2
    assert profile.min_horizontal_norm() == 1
    assert profile.linear_part_order == 1
    assert profile.flags == []
    assert profile.is_complete()


def test_translation_lattice_flags(q4):
    profile = _profile(q4, q4.imaginary_unit(), expected_linear_order=None)
    assert "lower_bound" in profile.flags
    F = _blocked(q4)
    thin = translation_lattice([F.reassemble(F.unipotent([1], 0))], F, word_len=3, expected_linear_order=1)
    assert "NotALattice" in thin.flags
    assert thin.vertical_generator is None
    assert not thin.is_complete()
    with pytest.raises(IncompleteProfile):
        incommensurable_cusps(thin, profile)


def test_incommensurable_model_cusps(q4, q12):
    gaussian = _profile(q4, q4.imaginary_unit())
    eisenstein = _profile(q12, q12.zeta_power(2))
    assert eisenstein.vertical_generator == q12.quadratic_surd(3)
    verdict = incommensurable_cusps(gaussian, eisenstein)
    assert verdict.label == "INCOMMENSURABLE"
    assert incommensurable_cusps(gaussian, gaussian).label == "NOT_DISTINGUISHED"


def test_scaled_copy_is_not_distinguished(q4):
    F = _blocked(q4)
    gaussian = _profile(q4, q4.imaginary_unit())
    gens = [F.reassemble(F.unipotent([2], 0)), F.reassemble(F.unipotent([2 * q4.imaginary_unit()], 0))]
    scaled = translation_lattice(gens, F, word_len=4, expected_linear_order=1)
    assert scaled.vertical_generator == 8
    assert incommensurable_cusps(gaussian, scaled).label == "NOT_DISTINGUISHED"


# === Cúspides do catálogo ===

@pytest.fixture(scope="module")
def g29_cusp(catalog):
    setup = cusp_setup("G29:3", catalog)
    profile = translation_lattice(setup.generators, setup.form, 6, expected_linear_order=setup.spec.expected_linear_order)
    return setup, profile


@pytest.fixture(scope="module")
def dm_cusp(catalog):
    setup = cusp_setup("B4_34_DM", catalog)
    profile = translation_lattice(setup.generators, setup.form, 6, expected_linear_order=setup.spec.expected_linear_order)
    return setup, profile


def _linear_parts(setup):
    return [parabolic_decompose(g, setup.form).B for g in setup.generators]


@pytest.mark.slow
def test_dm_linear_part(dm_cusp):
    setup, _ = dm_cusp
    linear = _linear_parts(setup)
    group = closure(linear)
    assert group.order == 96
    assert center(group).order == 4
    assert verify_identity(linear, "3", "2 1 2 1 2")


@pytest.mark.slow
def test_dm_translations_span_gaussian_lattice(dm_cusp):
    setup, profile = dm_cusp
    field = setup.form.field
    i = field.imaginary_unit()
    zero, one = field.zero, field.one
    standard = [(one, zero), (i, zero), (zero, one), (zero, i)]
    named = []
    for word in setup.spec.translation_words.values():
        h = parabolic_decompose(word_matrix(setup.generators, word), setup.form)
        assert h.is_translation()
        named.append(h.w)
    assert same_lattice(named, standard, field)
    assert profile.is_complete()
    assert profile.vertical_generator.is_rational()


@pytest.mark.slow
def test_g29_linear_part(g29_cusp):
    setup, profile = g29_cusp
    linear = _linear_parts(setup)
    assert closure(linear).order == 72
    assert profile.linear_part_order == 72
    assert "lower_bound" not in profile.flags
    assert verify_identity(linear, "1", "2 -3 2 3 -2")


@pytest.mark.slow
def test_g29_named_translations(g29_cusp):
    setup, profile = g29_cusp
    for name, word in setup.spec.translation_words.items():
        h = parabolic_decompose(word_matrix(setup.generators, word), setup.form)
        assert h == setup.expected_translation(name), name
    assert profile.vertical_generator == setup.expected_vertical_generator()
    assert profile.is_complete()


@pytest.mark.slow
def test_catalog_cusps_are_incommensurable(g29_cusp, dm_cusp):
    _, g29 = g29_cusp
    _, dm = dm_cusp
    verdict = incommensurable_cusps(dm, g29)
    assert verdict.label == "INCOMMENSURABLE"
    root3 = CycField(verdict.ratio.field.n).quadratic_surd(3)
    assert (verdict.ratio * root3).is_rational()
    assert incommensurable_cusps(g29, g29).label == "NOT_DISTINGUISHED"


@pytest.mark.slow
def test_dm_named_translations(dm_cusp):
    setup, _ = dm_cusp
    assert set(setup.spec.expected_translations) == set(setup.spec.translation_words)
    for name, h in setup.translation_elements().items():
        assert h == setup.expected_translation(name), name


@pytest.mark.slow
@pytest.mark.parametrize("fixture", ["g29_cusp", "dm_cusp"])
def test_named_translations_lie_in_enumerated_lattice(fixture, request):
    setup, profile = request.getfixturevalue(fixture)
    field = setup.form.field
    found = {tr.element for tr in profile.translations}
    for name in setup.spec.translation_words:
        h = setup.expected_translation(name)
        assert h in found, name
        assert same_lattice(profile.horizontal_basis, profile.horizontal_basis + [h.w], field), name


@pytest.mark.slow
def test_g29_conjugation_identities(g29_cusp):
    setup, _ = g29_cusp
    F = setup.form
    named = setup.translation_elements()
    assert named["V"] == F.vertical(setup.expected_vertical_generator())
    assert heis_commutator(named["T2"], named["T1"], F) == named["V"]

    checks = setup.conjugation_checks()
    assert len(checks) == 3
    for check in checks:
        assert check.holds, check.text

    S1 = word_matrix(setup.generators, "1")
    T1, T3, V = named["T1"], named["T3"], named["V"]
    assert conjugate_scaling(S1, named["T4"], F) == heis_mul(heis_inverse(heis_mul(T1, T3, F), F), V, F)


def test_conjugation_identity_detects_wrong_product(q4):
    F = _blocked(q4)
    i = q4.imaginary_unit()
    named = {"A": F.unipotent([1], 0), "B": F.unipotent([i], 0), "V": F.vertical(1)}
    rotation = F.reassemble(HeisElem(MatC.diagonal(q4, [i]), (q4.zero,), q4.zero))
    assert heis_product(["A", "-A"], named, F) == F.identity()
    assert conjugation_identity(rotation, named["A"], ["B"], named, F).holds
    assert not conjugation_identity(rotation, named["A"], ["B", "V"], named, F, "A -> B V").holds
