import json
from fractions import Fraction

import pytest

from lattice_system.algebra.cyclofield import CycField
from lattice_system.algebra.exactlin import MatC, Signature
from lattice_system.exceptions import ExpressionError
from lattice_system.generators.report_generator import ReportGenerator, format_params
from lattice_system.generators.serializers import (
    display, dumps, elem_from_json, elem_to_json, format_elem, matrix_from_json, matrix_to_json,
    parse_elem, signature_from_json, signature_to_json,
)


def _rows():
    return [
        {
            "family": "G29", "params": [3], "cocompact": False, "arithmetic": False,
            "trace_field": "Q(√3)", "expected_arithmetic": False, "expected_trace_field": "Q(√3)",
            "conjugate_signatures": {"1": [3, 1, 0], "5": [3, 1, 0]},
        },
        {
            "family": "G28", "params": [2, 5], "cocompact": True, "arithmetic": True,
            "trace_field": "Q", "expected_arithmetic": False, "expected_trace_field": "Q(√5)",
            "conjugate_signatures": {"1": [3, 1, 0]},
        },
    ]


# === Serialização ===

def test_format_and_parse_elem():
    field = CycField(5)
    a = field.element([Fraction(1, 2), 0, -3, 0])
    text = format_elem(a)
    assert text == "Q(zeta_5): [1/2, 0, -3, 0]"
    assert parse_elem(text) == a
    assert elem_from_json(elem_to_json(a)) == a


def test_parse_elem_errors():
    with pytest.raises(ExpressionError):
        parse_elem("zeta_5: [1]")
    with pytest.raises(ExpressionError):
        parse_elem("Q(zeta_5): [1, 2]")


def test_matrix_json(q4):
    M = MatC(q4, [[1, q4.imaginary_unit()], [Fraction(1, 3), 0]])
    data = matrix_to_json(M)
    assert (data["rows"], data["cols"], data["field"]) == (2, 2, 4)
    assert data["entries"][0][1] == ["0", "1"]
    assert matrix_from_json(json.loads(dumps(data))) == M
    data["rows"] = 3
    with pytest.raises(ExpressionError):
        matrix_from_json(data)


def test_signature_json():
    assert signature_to_json(Signature(3, 1, 0)) == [3, 1, 0]
    assert signature_from_json([4, 0, 1]) == Signature(4, 0, 1)


def test_display_of_real_surd():
    root2 = CycField(8).quadratic_surd(2)
    shown = display(root2)
    assert shown["exact"].startswith("Q(zeta_8): ")
    assert shown["approx"].startswith("1.41421356237")


def test_dumps_is_canonical():
    text = dumps({"b": 1, "a": "√3"})
    assert text == '{\n  "a": "√3",\n  "b": 1\n}'
    assert dumps(json.loads(text)) == text


# === Relatórios ===

def test_format_params():
    assert format_params([3]) == "3"
    assert format_params((2, 5)) == "(2,5)"


def test_invalid_output_format():
    with pytest.raises(ValueError):
        ReportGenerator("xml")


def test_table3_csv():
    lines = ReportGenerator("csv").render_table3(_rows()).splitlines()
    assert lines[0] == "family,params,cocompact,arithmetic,trace_field,match"
    assert lines[1] == "G29,3,NC,NA,Q(√3),True"
    assert lines[2] == 'G28,"(2,5)",C,A,Q,False'


def test_table3_json():
    data = json.loads(ReportGenerator("json").render_table3(_rows()))
    assert [row["match"] for row in data] == [True, False]
    assert data[1]["expected"] == {"arithmetic": False, "trace_field": "Q(√5)"}
    assert "expected_arithmetic" not in data[0]


def test_table3_text_reports_mismatches():
    report = ReportGenerator("text")
    text = report.render_table3(_rows())
    assert "1 linha(s) divergem" in text
    frame = report.table3_frame(_rows())
    assert frame.loc[1, "diff"] == "arithmetic esperado NA; trace_field esperado Q(√5)"
    assert "todas as linhas conferem" in report.render_table3(_rows()[:1])


def test_table2d_csv():
    rows = [{"family": "G23", "description": "H3", "p": 3, "cocompact": True, "arithmetic": False}]
    lines = ReportGenerator("csv").render_table2d(rows).splitlines()
    assert lines == ["family,description,p,cocompact,arithmetic", "G23,H3,3,C,NA"]


def test_render_document_text():
    data = {"cusp": "G29:3", "vertical_generator": {"exact": "Q(zeta_12): [0]", "approx": "1.7"}, "flags": []}
    text = ReportGenerator("text").render_document(data, "Cúspide G29:3")
    lines = text.splitlines()
    assert lines[0] == "Cúspide G29:3"
    assert "vertical_generator:" in lines
    assert "  Q(zeta_12): [0]  (approx 1.7)" in lines
    assert "flags: []" in lines
    assert ReportGenerator("csv").render_document(data) == dumps(data)
