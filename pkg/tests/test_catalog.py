import json
from fractions import Fraction

import pytest
import sympy

from lattice_system.algebra.cyclofield import CycField
from lattice_system.algebra.exactlin import MatC, Signature, galois_matrix, gram_pairing, numeric_signature
from lattice_system.catalog.expressions import (
    SymbolTable, evaluate, expression_conductor, parse_expression,
)
from lattice_system.catalog.families import (
    derive_g28_beta, enumerate_candidates, generic_g28_model, instantiate, load_catalog,
    normalize_params, parse_catalog, select_lattice_candidate,
)
from lattice_system.catalog.strata import (
    StratumData, cusp_strata, kappa, kappa_symbolic, parse_strata, printed_kappa_matches,
)
from lattice_system.exceptions import (
    AmbiguousSelection, CatalogFormatError, DegenerateParameters, DisallowedParams,
    ExpressionError, MetadataOnlyFamily, NoCandidate, NoStratumTable, UnknownFamily,
)
from lattice_system.groups.arith import classify_element
from lattice_system.groups.reflect import reflection


def _candidate(family, params, label, catalog):
    return next(c for c in enumerate_candidates(family, params, catalog) if c.label == label)


# === Expressões ===

@pytest.mark.parametrize("text,conductor", [
    ("sqrt(3)", 12),
    ("I", 4),
    ("unity(2, 12)", 6),
    ("I*sqrt(2)", 8),
    ("unity(1, 3)*I", 12),
    ("(1 + sqrt(5))/2", 5),
    ("7/3", 1),
])
def test_expression_conductor(text, conductor):
    assert expression_conductor(parse_expression(text)) == conductor


def test_parameters_are_substituted():
    expr = parse_expression("unity(1, p)", params={"p": 3})
    field = CycField(3)
    assert evaluate(expr, field, lambda name: None) == field.gen


def test_evaluate_golden_ratio():
    field = CycField(5)
    phi = evaluate(parse_expression("(1 + sqrt(5))/2"), field, lambda name: None)
    assert phi * phi == phi + 1


def test_invalid_expressions():
    with pytest.raises(ExpressionError):
        parse_expression("1 +")
    with pytest.raises(ExpressionError):
        evaluate(parse_expression("sin(1)"), CycField(4), lambda name: None)


def test_symbol_table_resolution():
    table = SymbolTable({"z": "unity(1, p)", "alpha": "1/(z - 1)", "mu": "1 + I"}, {"p": 3})
    assert table.conductor("alpha") == 3
    assert table.conductor_of([]) == 12
    env = table.environment(CycField(12))
    assert env("alpha") * (env("z") - 1) == 1
    assert env.value("mu*conj(mu)") == 2


def test_symbol_table_errors():
    with pytest.raises(ExpressionError):
        SymbolTable({"p": "1"})
    with pytest.raises(ExpressionError):
        SymbolTable({"I": "2"})
    circular = SymbolTable({"a": "b + 1", "b": "a"})
    with pytest.raises(ExpressionError):
        circular.conductor("a")
    with pytest.raises(ExpressionError):
        circular.environment(CycField(1))("a")
    with pytest.raises(ExpressionError):
        SymbolTable({}).environment(CycField(1)).value("x + 1")


def test_environment_wraps_incompatible_fields():
    env = SymbolTable({"r": "sqrt(3)"}).environment(CycField(5))
    with pytest.raises(ExpressionError):
        env("r")


# === Estratos ===

def test_kappa_values(catalog):
    b4 = catalog.strata["B4"]
    assert kappa(b4.row("L_234"), (3, 4)) == 1
    assert kappa(b4.row("L_123"), (3, 4)) == Fraction(4, 3)
    assert kappa(catalog.strata["G29"].row("L_124"), 3) == 1
    assert catalog.strata["G29"].row("L_124").mirror_count == 9
    assert b4.row("L_123").mirror_count == 9


def test_cusp_strata(catalog):
    assert [s.name for s in cusp_strata(catalog.strata, "B4", (3, 4))] == ["L_234"]
    assert [s.name for s in cusp_strata(catalog.strata, "G29", 3)] == ["L_124"]
    assert {s.name for s in cusp_strata(catalog.strata, "G29", 4)} == {"L_24", "L_123", "L_12343"}
    with pytest.raises(NoStratumTable):
        cusp_strata(catalog.strata, "G30", 5)
    with pytest.raises(NoStratumTable):
        cusp_strata(catalog.strata, "G31", 3)


def test_printed_kappa_column_matches_formula(catalog):
    for table in catalog.strata.values():
        for stratum in table.rows:
            assert printed_kappa_matches(stratum, table.orbit_symbols), (table.group, stratum.name)


def test_kappa_symbolic():
    p1, p2 = sympy.symbols("p1 p2", positive=True, integer=True)
    stratum = StratumData("L_12", (2, 2), 2)
    assert sympy.simplify(kappa_symbolic(stratum, ("p1", "p2")) - (2 - 2 / p1 - 2 / p2)) == 0
    with pytest.raises(ValueError):
        kappa_symbolic(stratum, ("p",))
    with pytest.raises(ValueError):
        kappa(stratum, (3, 4, 5))


def test_parse_strata_rejects_bad_counts():
    with pytest.raises(CatalogFormatError):
        parse_strata({"X": {"orbits": ["p"], "rows": [{"name": "L", "counts": [1, 2], "codim": 1}]}})
    with pytest.raises(CatalogFormatError):
        parse_strata({"X": {"rows": []}})


# === Catálogo ===

def test_catalog_contents(catalog):
    assert {"G28", "G29", "G30", "G31", "G33", "G34", "B4_34_DM"} <= set(catalog.families)
    assert set(catalog.metadata_only) == {"G23", "G24", "G27"}
    assert len(catalog.table3) == 23
    assert set(catalog.cusps) == {"G29:3", "B4_34_DM"}


def test_unknown_and_metadata_families(catalog):
    with pytest.raises(MetadataOnlyFamily):
        catalog.family("G23")
    with pytest.raises(UnknownFamily):
        catalog.family("G99")
    with pytest.raises(UnknownFamily):
        catalog.cusp("G30:5")


def test_normalize_params(catalog):
    assert normalize_params(catalog.family("B4_34_DM")) == (3, 4)
    assert catalog.family("G33").hyperbolic_dim == 4
    assert normalize_params(catalog.family("G29"), 3) == (3,)
    assert normalize_params(catalog.family("G28"), [2, 5]) == (2, 5)
    with pytest.raises(DisallowedParams):
        normalize_params(catalog.family("G29"))
    with pytest.raises(DisallowedParams):
        normalize_params(catalog.family("G29"), 5)


def test_load_catalog_errors(tmp_path):
    with pytest.raises(CatalogFormatError):
        load_catalog(str(tmp_path / "ausente.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(CatalogFormatError):
        load_catalog(str(broken))
    partial = tmp_path / "partial.json"
    partial.write_text(json.dumps({"version": "x"}), encoding="utf-8")
    with pytest.raises(CatalogFormatError):
        load_catalog(str(partial))


def test_conjugation_identities_must_name_known_translations(catalog):
    with open(catalog.path, encoding="utf-8") as f:
        raw = json.load(f)
    assert len(parse_catalog(raw).cusp("G29:3").conjugation_identities) == 3
    raw["cusps"]["G29:3"]["conjugation_identities"][0]["product"] = "T1 T9"
    with pytest.raises(CatalogFormatError):
        parse_catalog(raw)
    raw["cusps"]["B4_34_DM"]["conjugation_identities"] = [{"conjugator": "1", "target": "T(1,0)", "product": "V"}]
    raw["cusps"]["G29:3"]["conjugation_identities"] = []
    with pytest.raises(CatalogFormatError):
        parse_catalog(raw)


# === Instâncias e seleção ===

def test_g29_selects_positive_branch(catalog):
    inst = instantiate("G29", 3, catalog)
    assert inst.label == "mu=1+i"
    assert inst.form.signature() == Signature(3, 1, 0)
    assert inst.field.n == 12
    assert "mu" in inst.branch_choices
    assert inst.verify().all_passed


def test_g29_rejected_branch_has_loxodromic_conjugate(catalog):
    rejected = _candidate("G29", 3, "mu=1-i", catalog)
    assert not rejected.passed
    A = rejected.word("2 3 4")
    assert classify_element(A, rejected.form).kind == "elliptic_infinite"
    assert classify_element(galois_matrix(A, 7), rejected.form.galois(7)).kind == "loxodromic"


def test_selection_errors(catalog):
    candidates = enumerate_candidates("G29", 3, catalog)
    survivor = next(c for c in candidates if c.passed)
    with pytest.raises(AmbiguousSelection):
        select_lattice_candidate([survivor, survivor])
    rejected = [c for c in candidates if not c.passed]
    with pytest.raises(NoCandidate):
        select_lattice_candidate(rejected)


def test_g31_negative_root_branch(catalog):
    inst = _candidate("G31", 3, "r=-exp(i*pi/p)", catalog)
    assert inst.form.signature() == Signature(4, 0, 0)


def test_g31_p5_parabolic_word(catalog):
    inst = _candidate("G31", 5, "r=-exp(i*pi/p)", catalog)
    assert classify_element(inst.word("1 2 4"), inst.form).kind == "parabolic"


def test_g33_omega_branch_is_degenerate(catalog):
    inst = _candidate("G33", 3, "lambda=-omega", catalog)
    assert inst.form.signature().is_degenerate()


def test_dm_instance(catalog):
    inst = instantiate("B4_34_DM", None, catalog)
    assert inst.params == (3, 4)
    assert inst.form.signature() == Signature(3, 1, 0)
    assert inst.verify().all_passed


def test_dm_first_basis_vector_is_cusp_fixed_by_last_mirrors(catalog):
    inst = instantiate("B4_34_DM", None, catalog)
    F = inst.field
    e1 = (F.one, F.zero, F.zero, F.zero)
    assert gram_pairing(inst.form, e1, e1).is_zero()
    for r in inst.reflections[1:]:
        assert gram_pairing(inst.form, e1, r.polar).is_zero()
    assert not gram_pairing(inst.form, e1, inst.reflections[0].polar).is_zero()


def test_g29_cusp_vector_is_null(catalog):
    inst = instantiate("G29", 3, catalog)
    assert inst.label == "mu=1+i"
    F = inst.field
    zeta = F.zeta_power(1)
    z2 = zeta * zeta
    v = (z2, z2 + 1, F.zero, z2 + zeta - 1)
    assert gram_pairing(inst.form, v, v).is_zero()
    pairings = [gram_pairing(inst.form, v, r.polar) for r in inst.reflections]
    assert [x.is_zero() for x in pairings] == [True, True, False, True]


@pytest.mark.slow
@pytest.mark.parametrize("family", ["G28", "G29", "G30", "G31", "G33", "G34", "G35", "G36", "G37", "B4_34_DM"])
def test_every_instance_passes_its_presentation(family, catalog):
    spec = catalog.family(family)
    for params in spec.allowed_params:
        inst = instantiate(family, params, catalog)
        assert inst.form.signature() == Signature(spec.dim - 1, 1, 0), str(inst)
        report = inst.verify()
        assert report.all_passed, f"{inst}: {report.first_failure and report.first_failure.relation}"


# === G28 ===

def test_g28_beta_values():
    assert derive_g28_beta(4, 4).exact == 1
    beta = derive_g28_beta(2, 8)
    assert beta.square == Fraction(1, 2)
    assert beta.exact == CycField(8).quadratic_surd(2) / 2
    assert abs(float(beta.numeric) - 0.7071067811865476) < 1e-12
    assert derive_g28_beta(3, 3).exact is None
    with pytest.raises(DegenerateParameters):
        derive_g28_beta(2, 1)


def test_g28_generic_model_requires_beta_in_field():
    with pytest.raises(DegenerateParameters):
        generic_g28_model(3, 3)


def test_g28_generic_model_normalizes_diagonal(catalog):
    integral = instantiate("G28", (4, 4), catalog)
    model = generic_g28_model(4, 4, integral)
    field = model.form.field
    assert all(model.form.mat[j, j] == 1 for j in range(4))
    i = field.imaginary_unit()
    for j in (2, 3):
        e_j = [1 if a == j else 0 for a in range(4)]
        assert model.generators[j] == reflection(model.form, e_j, i).matrix
    assert model.multipliers == [i, i, i, i]
    assert model.basis_change * model.basis_change.inverse() == MatC.identity(field, 4)


@pytest.mark.slow
@pytest.mark.parametrize("family", ["G28", "G29", "G30", "G31", "G33", "G34", "G35", "G36", "G37", "B4_34_DM"])
def test_numeric_oracle_agrees_on_every_candidate_form(family, catalog):
    spec = catalog.family(family)
    for params in spec.allowed_params:
        for inst in enumerate_candidates(family, params, catalog):
            for k in inst.field.units():
                conjugate = inst.form.galois(k)
                assert numeric_signature(conjugate, 128) == conjugate.signature(), (str(inst), k)
