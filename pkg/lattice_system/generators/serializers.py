"""
Serialização exata de elementos, matrizes, assinaturas e perfis.

Todo JSON é emitido com sort_keys=True, indent=2 e ensure_ascii=False, de
modo que interpretar e reemitir um documento produz os mesmos bytes.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Sequence

from lattice_system.algebra.cyclofield import CycElem, CycField, approx
from lattice_system.algebra.exactlin import MatC, Signature
from lattice_system.exceptions import ExpressionError

_ELEM_PATTERN = re.compile(r"^\s*Q\(zeta_(\d+)\):\s*\[(.*)\]\s*$")


def dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


def _coeff_strings(a: CycElem) -> List[str]:
    return [str(Fraction(int(c.numerator), int(c.denominator))) for c in a.coeffs]


# === Elementos ===

def format_elem(a: CycElem) -> str:
    """"Q(zeta_n): [c0, c1, ...]" com racionais "p/q"."""
    return f"Q(zeta_{a.field.n}): [{', '.join(_coeff_strings(a))}]"


def parse_elem(text: str) -> CycElem:
    """
    Inverso de format_elem.

    Raises:
        ExpressionError: se o texto não segue o formato
    """
    match = _ELEM_PATTERN.match(text)
    if not match:
        raise ExpressionError(f"elemento mal formatado: {text!r}")
    field_ = CycField(int(match.group(1)))
    coeffs = [Fraction(c.strip()) for c in match.group(2).split(",") if c.strip()]
    if len(coeffs) != field_.basis_dim:
        raise ExpressionError(f"{len(coeffs)} coeficientes para {field_} (grau {field_.basis_dim})")
    return field_.element(coeffs)


def elem_to_json(a: CycElem) -> Dict[str, Any]:
    return {"field": a.field.n, "coeffs": _coeff_strings(a)}


def elem_from_json(data: Mapping) -> CycElem:
    return CycField(int(data["field"])).element([Fraction(c) for c in data["coeffs"]])


def display(a: CycElem, precision_bits: int = 128) -> Dict[str, str]:
    """Forma exata e aproximação com 15 algarismos significativos."""
    return {"exact": format_elem(a), "approx": approx(a, 15, precision_bits)}


# === Matrizes e assinaturas ===

def matrix_to_json(M: MatC) -> Dict[str, Any]:
    return {
        "field": M.field.n,
        "rows": M.rows,
        "cols": M.cols,
        "entries": [[_coeff_strings(a) for a in row] for row in M.entries],
    }


def matrix_from_json(data: Mapping) -> MatC:
    field_ = CycField(int(data["field"]))
    rows = [[field_.element([Fraction(c) for c in entry]) for entry in row] for row in data["entries"]]
    M = MatC(field_, rows)
    if (M.rows, M.cols) != (int(data["rows"]), int(data["cols"])):
        raise ExpressionError(f"dimensões declaradas {data['rows']}x{data['cols']} != {M.rows}x{M.cols}")
    return M


def signature_to_json(sig: Signature) -> List[int]:
    return [sig.pos, sig.neg, sig.zero]


def signature_from_json(data: Sequence[int]) -> Signature:
    return Signature(*(int(x) for x in data))


# === Documentos de saída ===

def instance_to_json(inst, precision_bits: int = 128) -> Dict[str, Any]:
    """Resumo de um GroupInstance: forma, geradores, ramos e testes de seleção."""
    return {
        "family": inst.spec.family,
        "params": list(inst.params),
        "branch": inst.label,
        "field": inst.field.n,
        "embedding_k": inst.field.embedding_k,
        "signature": signature_to_json(inst.form.signature()),
        "form": matrix_to_json(inst.form.mat),
        "generators": [matrix_to_json(M) for M in inst.generators],
        "branch_choices": {name: display(value, precision_bits) for name, value in inst.branch_choices.items()},
        "selection": [
            {"test": o.test, "passed": o.passed, "detail": o.detail} for o in inst.outcomes
        ],
    }


def verdict_to_json(family: str, params: Sequence[int], trace_field, verdict) -> Dict[str, Any]:
    """Veredicto de aritmeticidade no formato documentado."""
    return {
        "family": family,
        "params": list(params),
        "trace_field": trace_field.field_descriptor,
        "arithmetic": verdict.arithmetic,
        "conjugate_signatures": {str(k): signature_to_json(s) for k, s in sorted(verdict.conjugate_signatures.items())},
        "witnesses": [{"word": word, "value": format_elem(value)} for word, value in trace_field.witnesses],
    }


def profile_to_json(profile, precision_bits: int = 128) -> Dict[str, Any]:
    """CuspProfile: ordem da parte linear, gerador vertical, normas e translações."""
    vertical = profile.vertical_generator
    return {
        "linear_part_order": profile.linear_part_order,
        "vertical_generator": None if vertical is None else display(vertical, precision_bits),
        "horizontal_norms": [display(v, precision_bits) for v in profile.horizontal_norms],
        "horizontal_rank": profile.horizontal_rank,
        "flags": list(profile.flags),
        "translations": [
            {
                "word": tr.word,
                "w": [format_elem(a) for a in tr.element.w],
                "t": format_elem(tr.element.t),
            }
            for tr in profile.translations
        ],
    }


def incommensurability_to_json(verdict, precision_bits: int = 128) -> Dict[str, Any]:
    return {
        "verdict": verdict.label,
        "ratio": display(verdict.ratio, precision_bits),
        "rho_a": display(verdict.rho_a, precision_bits),
        "rho_b": display(verdict.rho_b, precision_bits),
    }
