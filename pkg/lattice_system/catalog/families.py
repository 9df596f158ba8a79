"""
Famílias CHL instanciadas a partir do catálogo declarativo.

Cada família do catálogo descreve um modelo (template de forma hermitiana com
vetores polares, ou matrizes geradoras explícitas), as escolhas de ramo
possíveis e a bateria de testes que seleciona o candidato que é um reticulado.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import mpmath
from sympy import factorint

from lattice_system.algebra.cyclofield import (
    CycElem, CycField, conj, galois, lift_to, real_sign, surd_conductor, to_complex,
)
from lattice_system.algebra.exactlin import HermForm, MatC, Signature, invariant_hermitian_form
from lattice_system.catalog.expressions import FieldEnvironment, SymbolTable
from lattice_system.catalog.strata import StratumTable, kappa, parse_strata
from lattice_system.config import DEFAULT_CATALOG_PATH
from lattice_system.exceptions import (
    AmbiguousSelection, CatalogFormatError, DegenerateParameters, DisallowedParams,
    FormMismatch, MetadataOnlyFamily, NoCandidate, UnknownFamily,
)
from lattice_system.groups.arith import classify_element, squarefree_candidates
from lattice_system.groups.cusp import (
    BlockedForm, ConjugationCheck, HeisElem, conjugation_identity, heis_product, parabolic_decompose,
)
from lattice_system.groups.reflect import (
    PresentationReport, Reflection, reflection, reflection_from_matrix,
    verify_presentation, word_matrix,
)

logger = logging.getLogger("LatticeSystem")

Params = Tuple[int, ...]


# === Estruturas do catálogo ===

@dataclass(frozen=True)
class Candidate:
    label: str
    bindings: Mapping[str, str]


@dataclass(frozen=True)
class FamilySpec:
    """Uma família do catálogo com seus parâmetros permitidos e veredictos esperados."""
    family: str
    description: str
    dim: int
    param_names: Tuple[str, ...]
    allowed_params: Tuple[Params, ...]
    mirror_orbit_count: int
    symbols: Mapping[str, str]
    candidates: Tuple[Candidate, ...]
    model: Mapping
    relations: Tuple[str, ...]
    selection: Tuple[Mapping, ...]
    trace_witnesses: Tuple[str, ...]
    integral_ring: str
    strata_table: Optional[str] = None
    cocompact_table: Mapping[Params, bool] = field(default_factory=dict)
    expected_verdicts: Mapping[Params, Tuple[bool, str]] = field(default_factory=dict)

    @property
    def hyperbolic_dim(self) -> int:
        return self.dim - 1

    def param_map(self, params: Params) -> Dict[str, int]:
        return dict(zip(self.param_names, params))

    def relations_for(self, params: Params) -> List[str]:
        """Linhas de relação com {p}, {q}, ... substituídos."""
        values = self.param_map(params)
        return [line.format(**values) for line in self.relations]


@dataclass(frozen=True)
class MetadataRow:
    p: int
    cocompact: bool
    arithmetic: bool


@dataclass(frozen=True)
class MetadataFamily:
    """Família bidimensional presente apenas como metadado (sem matrizes)."""
    family: str
    description: str
    dimension: int
    rows: Tuple[MetadataRow, ...]


@dataclass(frozen=True)
class Table3Row:
    family: str
    params: Params
    cocompact: bool
    arithmetic: bool
    trace_field: str


@dataclass(frozen=True)
class CuspSpec:
    key: str
    family: str
    params: Params
    stratum: Optional[str]
    generators: Tuple[int, ...]
    symbols: Mapping[str, str]
    basis_change: Optional[Tuple[Tuple[str, ...], ...]]
    adapted_form: Optional[Tuple[Tuple[str, ...], ...]]
    expected_linear_order: Optional[int]
    expected_center_order: Optional[int]
    linear_relations: Tuple[str, ...]
    translation_words: Mapping[str, str]
    expected_translations: Mapping[str, Mapping]
    vertical_generator: Optional[str]
    conjugation_identities: Tuple[ConjugationSpec, ...] = ()


@dataclass(frozen=True)
class ConjugationSpec:
    """conjugator·target·conjugator⁻¹ = product, com "V" para o gerador vertical."""
    conjugator: str
    target: str
    product: Tuple[str, ...]

    @property
    def text(self) -> str:
        return f"[{self.conjugator}] {self.target} [{self.conjugator}]⁻¹ = {' '.join(self.product)}"


@dataclass
class Catalog:
    version: str
    notes: List[str]
    families: Dict[str, FamilySpec]
    metadata_only: Dict[str, MetadataFamily]
    strata: Dict[str, StratumTable]
    cusps: Dict[str, CuspSpec]
    table3: List[Table3Row]
    path: Optional[str] = None

    def family(self, name: str) -> FamilySpec:
        """
        Raises:
            MetadataOnlyFamily: para G23, G24, G27 (apenas metadados)
            UnknownFamily: para nomes fora do catálogo
        """
        if name in self.families:
            return self.families[name]
        if name in self.metadata_only:
            raise MetadataOnlyFamily(f"{name} é uma família apenas de metadados (dimensão 2, sem matrizes)")
        raise UnknownFamily(f"família desconhecida: {name}")

    def cusp(self, key: str) -> CuspSpec:
        if key not in self.cusps:
            raise UnknownFamily(f"sem configuração de cúspide para {key}; disponíveis: {sorted(self.cusps)}")
        return self.cusps[key]


def _params_tuple(value) -> Params:
    if isinstance(value, int):
        return (value,)
    return tuple(int(x) for x in value)


def _matrix_texts(rows) -> Optional[Tuple[Tuple[str, ...], ...]]:
    if rows is None:
        return None
    return tuple(tuple(str(x) for x in row) for row in rows)


def _parse_family(name: str, data: Mapping, table3: Sequence[Table3Row]) -> FamilySpec:
    rows = [row for row in table3 if row.family == name]
    return FamilySpec(
        family=name,
        description=data.get("description", ""),
        dim=int(data["dim"]),
        param_names=tuple(data["params"]),
        allowed_params=tuple(_params_tuple(p) for p in data["allowed"]),
        mirror_orbit_count=int(data.get("mirror_orbits", 1)),
        symbols=dict(data.get("symbols", {})),
        candidates=tuple(Candidate(c["label"], dict(c.get("bindings", {}))) for c in data["candidates"]),
        model=data["model"],
        relations=tuple(data["relations"]),
        selection=tuple(data.get("selection", ())),
        trace_witnesses=tuple(data.get("trace_witnesses", ())),
        integral_ring=data.get("integral_ring", ""),
        strata_table=data.get("strata_table"),
        cocompact_table={row.params: row.cocompact for row in rows},
        expected_verdicts={row.params: (row.arithmetic, row.trace_field) for row in rows},
    )


def _parse_conjugations(key: str, data: Mapping) -> Tuple[ConjugationSpec, ...]:
    names = set(data.get("translation_words", {}))
    if data.get("vertical_generator") is not None:
        names.add("V")
    result = []
    for entry in data.get("conjugation_identities", ()):
        product = tuple(entry["product"].split())
        unknown = [tok for tok in (entry["target"],) + product if tok.lstrip("-") not in names]
        if unknown:
            raise CatalogFormatError(f"{key}: identidade de conjugação com nomes desconhecidos {unknown}")
        result.append(ConjugationSpec(str(entry["conjugator"]), entry["target"], product))
    return tuple(result)


def _parse_cusp(key: str, data: Mapping) -> CuspSpec:
    return CuspSpec(
        key=key,
        family=data["family"],
        params=_params_tuple(data["params"]),
        stratum=data.get("stratum"),
        generators=tuple(int(g) for g in data["generators"]),
        symbols=dict(data.get("symbols", {})),
        basis_change=_matrix_texts(data.get("basis_change")),
        adapted_form=_matrix_texts(data.get("adapted_form")),
        expected_linear_order=data.get("expected_linear_order"),
        expected_center_order=data.get("expected_center_order"),
        linear_relations=tuple(data.get("linear_relations", ())),
        translation_words=dict(data.get("translation_words", {})),
        expected_translations=dict(data.get("expected_translations", {})),
        vertical_generator=data.get("vertical_generator"),
        conjugation_identities=_parse_conjugations(key, data),
    )


def parse_catalog(raw: Mapping, path: Optional[str] = None) -> Catalog:
    """
    Constrói o Catalog a partir do documento JSON já carregado.

    Raises:
        CatalogFormatError: se alguma seção obrigatória está ausente ou malformada
    """
    try:
        table3 = [
            Table3Row(r["family"], _params_tuple(r["params"]), bool(r["cocompact"]), bool(r["arithmetic"]), r["trace_field"])
            for r in raw["table3"]
        ]
        families = {name: _parse_family(name, data, table3) for name, data in raw["families"].items()}
        metadata = {
            name: MetadataFamily(
                name,
                data.get("description", ""),
                int(data.get("dimension", 2)),
                tuple(MetadataRow(int(r["p"]), bool(r["cocompact"]), bool(r["arithmetic"])) for r in data["rows"]),
            )
            for name, data in raw.get("metadata_only", {}).items()
        }
        cusps = {key: _parse_cusp(key, data) for key, data in raw.get("cusps", {}).items()}
        catalog = Catalog(
            version=str(raw["version"]),
            notes=list(raw.get("notes", [])),
            families=families,
            metadata_only=metadata,
            strata=parse_strata(raw.get("strata", {})),
            cusps=cusps,
            table3=table3,
            path=path,
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CatalogFormatError(f"catálogo malformado: {e!r}") from e

    for row in catalog.table3:
        spec = catalog.families.get(row.family)
        if spec is None:
            raise CatalogFormatError(f"linha da tabela de veredictos para família ausente: {row.family}")
        if row.params not in spec.allowed_params:
            raise CatalogFormatError(f"linha da tabela de veredictos {row.family} {row.params} fora dos parâmetros permitidos")
    return catalog


def load_catalog(path: Optional[str] = None) -> Catalog:
    """
    Carrega e valida o catálogo.

    Args:
        path: Arquivo JSON; o catálogo embutido quando None

    Raises:
        CatalogFormatError: se o arquivo não existe ou não é JSON válido
    """
    path = path or DEFAULT_CATALOG_PATH
    if path == DEFAULT_CATALOG_PATH:
        return _default_catalog()
    return _load_catalog_file(path)


def _load_catalog_file(path: str) -> Catalog:
    if not os.path.exists(path):
        raise CatalogFormatError(f"catálogo não encontrado: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except json.JSONDecodeError as e:
        raise CatalogFormatError(f"catálogo não é JSON válido ({path}): {e}") from e
    catalog = parse_catalog(raw, path)
    logger.debug(f"Catálogo {catalog.version} carregado de {path}: {len(catalog.families)} famílias")
    return catalog


@lru_cache(maxsize=1)
def _default_catalog() -> Catalog:
    return _load_catalog_file(DEFAULT_CATALOG_PATH)


# === Instâncias ===

@dataclass
class SelectionOutcome:
    """Resultado de um teste de seleção; passed=None quando o teste não se aplica."""
    test: str
    passed: Optional[bool]
    detail: str = ""


@dataclass
class GroupInstance:
    spec: FamilySpec
    params: Params
    label: str
    branch_choices: Dict[str, CycElem]
    form: HermForm
    reflections: List[Reflection]
    field: CycField
    symbols: SymbolTable
    outcomes: List[SelectionOutcome] = field(default_factory=list)

    @property
    def H(self) -> HermForm:
        return self.form

    @property
    def gens(self) -> List[Reflection]:
        return self.reflections

    @property
    def generators(self) -> List[MatC]:
        return [r.matrix for r in self.reflections]

    @property
    def passed(self) -> bool:
        return all(outcome.passed is not False for outcome in self.outcomes)

    def environment(self) -> FieldEnvironment:
        return self.symbols.environment(self.field)

    def verify(self, jobs: int = 1) -> PresentationReport:
        """Verifica a apresentação documentada da família nestas matrizes."""
        return verify_presentation(self.generators, self.spec.relations_for(self.params), jobs)

    def word(self, text: str) -> MatC:
        return word_matrix(self.generators, text)

    def __str__(self) -> str:
        return f"{self.spec.family}{list(self.params)} [{self.label}]"


def normalize_params(spec: FamilySpec, params=None) -> Params:
    """
    Parâmetros como tupla; o único valor permitido quando params é None.

    Raises:
        DisallowedParams: se os parâmetros não constam da lista da família
    """
    if params is None:
        if len(spec.allowed_params) == 1:
            return spec.allowed_params[0]
        raise DisallowedParams(f"{spec.family} exige parâmetros: {[list(p) for p in spec.allowed_params]}")
    value = _params_tuple(params)
    if value not in spec.allowed_params:
        raise DisallowedParams(f"{spec.family} não admite {list(value)}; permitidos: {[list(p) for p in spec.allowed_params]}")
    return value


def _model_texts(model: Mapping) -> List[str]:
    texts: List[str] = []
    if model["kind"] == "matrices":
        for M in model["generators"]:
            texts.extend(str(x) for row in M for x in row)
        return texts
    form = model["form"]
    if "matrix" in form:
        texts.extend(str(x) for row in form["matrix"] for x in row)
    else:
        texts.append(str(form.get("diagonal", "1")))
        texts.extend(str(entry[2]) for entry in form.get("upper", ()))
    polars = model.get("polars", "standard")
    if polars != "standard":
        texts.extend(str(x) for v in polars for x in v)
    texts.extend(str(x) for v in model.get("extra_polars", ()) for x in v)
    multipliers = model.get("multipliers", "1")
    texts.extend([multipliers] if isinstance(multipliers, str) else [str(x) for x in multipliers])
    return texts


def _form_matrix(form: Mapping, dim: int, env: FieldEnvironment) -> MatC:
    """Matriz da forma: explícita, ou diagonal + triângulo superior com complemento hermitiano."""
    if "matrix" in form:
        return MatC(env.field, [[env.value(x) for x in row] for row in form["matrix"]])
    diagonal = env.value(form.get("diagonal", "1"))
    rows = [[diagonal if i == j else env.field.zero for j in range(dim)] for i in range(dim)]
    for i, j, text in form.get("upper", ()):
        value = env.value(text)
        rows[i - 1][j - 1] = value
        rows[j - 1][i - 1] = conj(value)
    return MatC(env.field, rows)


def _polar_vectors(model: Mapping, dim: int, env: FieldEnvironment) -> List[Tuple[CycElem, ...]]:
    polars = model.get("polars", "standard")
    if polars == "standard":
        vectors = [tuple(env.field.one if a == j else env.field.zero for a in range(dim)) for j in range(dim)]
    else:
        vectors = [tuple(env.value(x) for x in v) for v in polars]
    vectors.extend(tuple(env.value(x) for x in v) for v in model.get("extra_polars", ()))
    return vectors


def _multipliers(model: Mapping, count: int, env: FieldEnvironment) -> List[CycElem]:
    multipliers = model.get("multipliers", "1")
    if isinstance(multipliers, str):
        return [env.value(multipliers)] * count
    if len(multipliers) != count:
        raise CatalogFormatError(f"{len(multipliers)} multiplicadores para {count} vetores polares")
    return [env.value(x) for x in multipliers]


def _orient(form: HermForm) -> HermForm:
    """Troca o sinal de uma forma resolvida com mais quadrados negativos que positivos."""
    sig = form.signature()
    if sig.neg > sig.pos:
        return HermForm(-form.mat)
    return form


def build_candidate(spec: FamilySpec, params: Params, candidate: Candidate) -> GroupInstance:
    """Instancia um único ramo (sem aplicar os testes de seleção)."""
    definitions = dict(spec.symbols)
    definitions.update(candidate.bindings)
    table = SymbolTable(definitions, spec.param_map(params))
    field_ = CycField(table.conductor_of(_model_texts(spec.model)))
    env = table.environment(field_)
    model = spec.model

    if model["kind"] == "matrices":
        matrices = [MatC(field_, [[env.value(x) for x in row] for row in M]) for M in model["generators"]]
        form = _orient(invariant_hermitian_form(matrices))
        reflections = [reflection_from_matrix(M, form) for M in matrices]
    elif model["kind"] == "form":
        form = HermForm(_form_matrix(model["form"], spec.dim, env))
        polars = _polar_vectors(model, spec.dim, env)
        reflections = [reflection(form, v, z) for v, z in zip(polars, _multipliers(model, len(polars), env))]
    else:
        raise CatalogFormatError(f"{spec.family}: tipo de modelo desconhecido {model['kind']!r}")

    choices = {name: env(name) for name in candidate.bindings}
    choices.update((name, env(name)) for name in spec.symbols if name not in choices)
    logger.debug(f"Candidato {spec.family}{list(params)} [{candidate.label}] sobre {field_}")
    return GroupInstance(spec, params, candidate.label, choices, form, reflections, field_, table)


# === Testes de seleção ===

def _test_signature(inst: GroupInstance, test: Mapping, catalog: Catalog) -> SelectionOutcome:
    sig = inst.form.signature()
    expected = Signature(inst.spec.hyperbolic_dim, 1, 0)
    return SelectionOutcome("signature", sig == expected, f"assinatura {sig}")


def _test_kappa_subblock(inst: GroupInstance, test: Mapping, catalog: Catalog) -> SelectionOutcome:
    table = catalog.strata.get(test.get("table", inst.spec.strata_table))
    if table is None:
        raise CatalogFormatError(f"{inst.spec.family}: teste kappa_subblock sem tabela de estratos")
    stratum = table.row(test["stratum"])
    value = kappa(stratum, inst.params)
    if value <= 1:
        return SelectionOutcome("kappa_subblock", None, f"κ({stratum.name}) = {value} <= 1")
    indices = [g - 1 for g in test["generators"]]
    sig = inst.form.restrict(indices).signature()
    expected = Signature(len(indices) - 1, 1, 0)
    return SelectionOutcome("kappa_subblock", sig == expected, f"κ({stratum.name}) = {value}, bloco {test['generators']}: {sig}")


def _test_degenerate_parabolic(inst: GroupInstance, test: Mapping, catalog: Catalog) -> SelectionOutcome:
    if not inst.spec.cocompact_table.get(inst.params, False):
        return SelectionOutcome("degenerate_parabolic", None, "grupo não cocompacto")
    indices = [g - 1 for g in test["generators"]]
    sig = inst.form.restrict(indices).signature()
    if not sig.is_degenerate():
        return SelectionOutcome("degenerate_parabolic", True, f"bloco {test['generators']}: {sig}")
    kind = classify_element(inst.word(test["word"]), inst.form).kind
    return SelectionOutcome(
        "degenerate_parabolic",
        kind != "parabolic",
        f"bloco {test['generators']} degenerado, {test['word']} é {kind}",
    )


def _test_not_elliptic_infinite(inst: GroupInstance, test: Mapping, catalog: Catalog) -> SelectionOutcome:
    only = test.get("params")
    if only is not None and inst.params not in {_params_tuple(p) for p in only}:
        return SelectionOutcome("not_elliptic_infinite", None, "parâmetros fora do escopo do teste")
    kind = classify_element(inst.word(test["word"]), inst.form).kind
    return SelectionOutcome("not_elliptic_infinite", kind != "elliptic_infinite", f"{test['word']} é {kind}")


SELECTION_TESTS = {
    "signature": _test_signature,
    "kappa_subblock": _test_kappa_subblock,
    "degenerate_parabolic": _test_degenerate_parabolic,
    "not_elliptic_infinite": _test_not_elliptic_infinite,
}


def run_selection_tests(inst: GroupInstance, catalog: Catalog) -> List[SelectionOutcome]:
    outcomes = []
    for test in inst.spec.selection:
        runner = SELECTION_TESTS.get(test.get("test"))
        if runner is None:
            raise CatalogFormatError(f"{inst.spec.family}: teste de seleção desconhecido {test.get('test')!r}")
        outcome = runner(inst, test, catalog)
        outcomes.append(outcome)
        logger.debug(f"{inst}: {outcome.test} -> {outcome.passed} ({outcome.detail})")
    return outcomes


def enumerate_candidates(family: str, params=None, catalog: Optional[Catalog] = None) -> List[GroupInstance]:
    """
    Todos os ramos da família para os parâmetros dados, com os resultados dos testes.

    Raises:
        UnknownFamily: família fora do catálogo
        MetadataOnlyFamily: família bidimensional sem matrizes
        DisallowedParams: parâmetros fora da lista permitida
    """
    catalog = catalog or load_catalog()
    spec = catalog.family(family)
    value = normalize_params(spec, params)
    candidates = []
    for candidate in spec.candidates:
        inst = build_candidate(spec, value, candidate)
        inst.outcomes = run_selection_tests(inst, catalog)
        candidates.append(inst)
    return candidates


def select_lattice_candidate(candidates: Sequence[GroupInstance]) -> GroupInstance:
    """
    O único candidato que passa todos os testes de seleção.

    Raises:
        NoCandidate: nenhum candidato passa
        AmbiguousSelection: mais de um candidato passa
    """
    survivors = [c for c in candidates if c.passed]
    if not survivors:
        details = "; ".join(f"{c.label}: {[o.detail for o in c.outcomes if o.passed is False]}" for c in candidates)
        raise NoCandidate(f"nenhum candidato passou os testes de seleção ({details})")
    if len(survivors) > 1:
        raise AmbiguousSelection(f"{len(survivors)} candidatos passaram: {[c.label for c in survivors]}")
    return survivors[0]


def instantiate(family: str, params=None, catalog: Optional[Catalog] = None) -> GroupInstance:
    """
    Instancia o reticulado CHL da família.

    Args:
        family: Nome da família (G28, ..., G37, B4_34_DM)
        params: p, (p, q) ou None quando há um único valor permitido
        catalog: Catálogo; o embutido quando None

    Returns:
        GroupInstance selecionado, com branch_choices registradas
    """
    return select_lattice_candidate(enumerate_candidates(family, params, catalog))


# === G28: β e o modelo normalizado ===

@dataclass
class G28Beta:
    params: Params
    square: CycElem
    exact: Optional[CycElem]
    numeric: mpmath.mpf


def _squarefree_part(value: Fraction) -> Tuple[int, Fraction]:
    """value = c²·d com d livre de quadrados; devolve (d, c) com c > 0."""
    n = value.numerator * value.denominator
    d = -1 if n < 0 else 1
    square = 1
    for prime, e in factorint(abs(n)).items():
        if e % 2:
            d *= prime
        square *= prime ** (e // 2)
    return d, Fraction(square, value.denominator)


def _rational_sqrt(value: Fraction) -> Optional[Fraction]:
    if value < 0:
        return None
    d, c = _squarefree_part(value)
    return c if d == 1 else None


def _surd(field_: CycField, d: int) -> Optional[CycElem]:
    if d == 1:
        return field_.one
    if field_.n % surd_conductor(d):
        return None
    return field_.quadratic_surd(d)


def _flip_exponent(field_: CycField, root: CycElem) -> Optional[int]:
    return next((k for k in field_.units() if galois(root, k) == -root), None)


def exact_square_root(x: CycElem) -> Optional[CycElem]:
    """
    Raiz quadrada real positiva de x no próprio corpo, quando x é real e
    pertence a um subcorpo quadrático real.

    Procura √x = √d1·(c + e·√d0) com c, e racionais.
    """
    field_ = x.field
    if not x.is_real() or real_sign(x) <= 0:
        return None
    if x.is_rational():
        d, c = _squarefree_part(x.rational_value())
        root = _surd(field_, d)
        return None if root is None else root * c
    for d0 in squarefree_candidates(field_.n):
        r0 = _surd(field_, d0)
        if r0 is None:
            continue
        k = _flip_exponent(field_, r0)
        if k is None:
            continue
        for d1 in [1] + squarefree_candidates(field_.n):
            r1 = _surd(field_, d1)
            if r1 is None:
                continue
            y = x / d1
            y_bar = galois(y, k)
            a, b = (y + y_bar) / 2, (y - y_bar) / (2 * r0)
            if not (a.is_rational() and b.is_rational()) or b.is_zero():
                continue
            a, b = a.rational_value(), b.rational_value()
            disc = _rational_sqrt(a * a - d0 * b * b)
            if disc is None:
                continue
            for c2 in ((a + disc) / 2, (a - disc) / 2):
                c = _rational_sqrt(c2)
                if not c:
                    continue
                e = b / (2 * c)
                root = r1 * (r0 * e + c)
                if root * root == x:
                    return root if real_sign(root) > 0 else -root
    return None


def derive_g28_beta(p: int, q: int, precision_bits: int = 128) -> G28Beta:
    """
    β² = (z+w)/(z+w-1-zw) para z = e^{2πi/p}, w = e^{2πi/q}.

    O ramo escolhido é o de β real positivo; o ramo β = 0 (R_3, R_4 comutando)
    é excluído.

    Raises:
        DegenerateParameters: se z + w = 0
    """
    field_ = CycField(p * q // gcd(p, q))
    z, w = field_.root_of_unity(1, p), field_.root_of_unity(1, q)
    if (z + w).is_zero():
        raise DegenerateParameters(f"z + w = 0 para (p, q) = ({p}, {q})")
    square = (z + w) / (z + w - 1 - z * w)
    with mpmath.workprec(precision_bits):
        numeric = mpmath.sqrt(to_complex(square, precision_bits).real)
    exact = exact_square_root(square)
    logger.debug(f"G28 ({p},{q}): β² = {square!r}, β exato: {exact is not None}")
    return G28Beta((p, q), square, exact, numeric)


@dataclass
class G28GenericModel:
    """Forma tridiagonal normalizada e as matrizes Q·R̃_j·Q⁻¹ correspondentes."""
    beta: G28Beta
    form: HermForm
    generators: List[MatC]
    basis_change: MatC
    multipliers: List[CycElem]


def generic_g28_model(p: int, q: int, integral: Optional[GroupInstance] = None) -> G28GenericModel:
    """
    Reconstrói o modelo com diagonal 1 a partir do modelo inteiro, pela mudança
    de base Q com Q⁻¹R_jQ = R̃_j.

    Raises:
        DegenerateParameters: se β não pertence ao corpo de z e w
    """
    beta = derive_g28_beta(p, q)
    if beta.exact is None:
        raise DegenerateParameters(f"β não pertence a Q(ζ_{beta.square.field.n}) para (p, q) = ({p}, {q})")
    integral = integral or instantiate("G28", (p, q))
    field_ = integral.field
    b = lift_to(beta.exact, field_)
    z, w = field_.root_of_unity(1, p), field_.root_of_unity(1, q)
    alpha, gamma = (z - 1).inverse(), (w - 1).inverse()
    zero, one = field_.zero, field_.one
    H = MatC(field_, [
        [one, alpha, zero, zero],
        [conj(alpha), one, b, zero],
        [zero, conj(b), one, gamma],
        [zero, zero, conj(gamma), one],
    ])
    s = z + w
    Q = MatC(field_, [
        [one, zero, zero, zero],
        [zero, one, -w, conj(z)],
        [zero, zero, s / (b * (1 - z)), s / (b * z * w * (z - 1))],
        [zero, zero, zero, s / (b * z * w * (z - 1))],
    ])
    Q_inv = Q.inverse()
    generators = [Q * M * Q_inv for M in integral.generators]
    return G28GenericModel(beta, HermForm(H), generators, Q, [z, z, w, w])


# === Configuração de cúspides ===

@dataclass
class CuspSetup:
    spec: CuspSpec
    instance: GroupInstance
    generators: List[MatC]
    form: BlockedForm
    basis_change: Optional[MatC]
    environment: FieldEnvironment

    def expected_translation(self, name: str) -> Optional[HeisElem]:
        data = self.spec.expected_translations.get(name)
        if data is None:
            return None
        return self.form.unipotent([self.environment.value(x) for x in data["w"]], self.environment.value(data["t"]))

    def expected_vertical_generator(self) -> Optional[CycElem]:
        if self.spec.vertical_generator is None:
            return None
        return self.environment.value(self.spec.vertical_generator)

    def translation_elements(self) -> Dict[str, HeisElem]:
        """As translações nomeadas do catálogo, calculadas pelas suas palavras."""
        named = {
            name: parabolic_decompose(word_matrix(self.generators, word), self.form)
            for name, word in self.spec.translation_words.items()
        }
        vertical = self.expected_vertical_generator()
        if vertical is not None:
            named["V"] = self.form.vertical(vertical)
        return named

    def conjugation_checks(self) -> List[ConjugationCheck]:
        named = self.translation_elements()
        return [
            conjugation_identity(
                word_matrix(self.generators, c.conjugator), heis_product((c.target,), named, self.form),
                c.product, named, self.form, c.text,
            )
            for c in self.spec.conjugation_identities
        ]


def cusp_setup(key: str, catalog: Optional[Catalog] = None) -> CuspSetup:
    """
    Geradores do estabilizador parabólico já na base adaptada à cúspide.

    Raises:
        FormMismatch: se Q*HQ não coincide com a forma adaptada do catálogo
    """
    catalog = catalog or load_catalog()
    spec = catalog.cusp(key)
    inst = instantiate(spec.family, spec.params, catalog)
    definitions = dict(inst.symbols.definitions)
    definitions.update(spec.symbols)
    table = SymbolTable(definitions, inst.symbols.params)
    texts = [x for rows in (spec.basis_change or (), spec.adapted_form or ()) for row in rows for x in row]
    n = inst.field.n
    m = table.conductor_of(texts)
    field_ = CycField(n * m // gcd(n, m))
    env = table.environment(field_)

    generators = [inst.generators[g - 1].lift_to(field_) for g in spec.generators]
    H = inst.form.mat.lift_to(field_)
    Q = None
    if spec.basis_change is not None:
        Q = MatC(field_, [[env.value(x) for x in row] for row in spec.basis_change])
        Q_inv = Q.inverse()
        generators = [Q_inv * M * Q for M in generators]
        H = Q.conjugate_transpose() * H * Q
    if spec.adapted_form is not None:
        expected = MatC(field_, [[env.value(x) for x in row] for row in spec.adapted_form])
        if H != expected:
            raise FormMismatch(f"{key}: Q*HQ difere da forma adaptada do catálogo")
    F = BlockedForm(HermForm(H))
    if F.field != field_:
        generators = [M.lift_to(F.field) for M in generators]
        env = table.environment(F.field)
    logger.debug(f"Cúspide {key}: {len(generators)} geradores sobre {F.field}")
    return CuspSetup(spec, inst, generators, F, Q, env)
