"""
Gerador de relatórios: tabelas de veredictos em texto, JSON ou CSV.
"""

import io
import logging
import pandas as pd
from typing import Any, Dict, List, Sequence

from lattice_system.generators.serializers import dumps

logger = logging.getLogger("LatticeSystem")

TABLE3_CSV_COLUMNS = ["family", "params", "cocompact", "arithmetic", "trace_field", "match"]

OUTPUT_FORMATS = ("text", "json", "csv")


def format_params(params: Sequence[int]) -> str:
    params = list(params)
    if len(params) == 1:
        return str(params[0])
    return "(" + ",".join(str(p) for p in params) + ")"


class ReportGenerator:
    """
    Monta DataFrames a partir das linhas calculadas e os renderiza.

    Args:
        output: "text", "json" ou "csv"
    """

    def __init__(self, output: str = "text"):
        if output not in OUTPUT_FORMATS:
            raise ValueError(f"formato de saída inválido: {output}")
        self.output = output

    # === Tabela de veredictos ===

    def table3_frame(self, rows: List[Dict[str, Any]]) -> pd.DataFrame:
        """
        Uma linha por entrada da tabela de veredictos, com os valores calculados, os
        esperados e uma coluna diff descrevendo divergências.
        """
        records = []
        for row in rows:
            diff = []
            if row["arithmetic"] != row["expected_arithmetic"]:
                diff.append(f"arithmetic esperado {'A' if row['expected_arithmetic'] else 'NA'}")
            if row["trace_field"] != row["expected_trace_field"]:
                diff.append(f"trace_field esperado {row['expected_trace_field']}")
            records.append({
                "family": row["family"],
                "params": format_params(row["params"]),
                "cocompact": "C" if row["cocompact"] else "NC",
                "arithmetic": "A" if row["arithmetic"] else "NA",
                "trace_field": row["trace_field"],
                "match": not diff,
                "diff": "; ".join(diff),
            })
        return pd.DataFrame(records, columns=TABLE3_CSV_COLUMNS + ["diff"])

    def render_table3(self, rows: List[Dict[str, Any]]) -> str:
        frame = self.table3_frame(rows)
        if self.output == "csv":
            buffer = io.StringIO()
            frame[TABLE3_CSV_COLUMNS].to_csv(buffer, index=False, lineterminator="\n")
            return buffer.getvalue()
        if self.output == "json":
            return dumps([self._json_row(row) for row in rows])
        mismatches = int((~frame["match"]).sum())
        summary = "✅ todas as linhas conferem" if not mismatches else f"❌ {mismatches} linha(s) divergem"
        return frame.to_string(index=False) + "\n\n" + summary + "\n"

    @staticmethod
    def _json_row(row: Dict[str, Any]) -> Dict[str, Any]:
        data = {k: v for k, v in row.items() if k not in ("expected_arithmetic", "expected_trace_field")}
        data["params"] = list(row["params"])
        data["expected"] = {"arithmetic": row["expected_arithmetic"], "trace_field": row["expected_trace_field"]}
        data["match"] = (
            row["arithmetic"] == row["expected_arithmetic"]
            and row["trace_field"] == row["expected_trace_field"]
        )
        return data

    # === Tabela das famílias bidimensionais ===

    def render_table2d(self, rows: List[Dict[str, Any]]) -> str:
        frame = pd.DataFrame(
            [
                {
                    "family": r["family"],
                    "description": r["description"],
                    "p": r["p"],
                    "cocompact": "C" if r["cocompact"] else "NC",
                    "arithmetic": "A" if r["arithmetic"] else "NA",
                }
                for r in rows
            ],
            columns=["family", "description", "p", "cocompact", "arithmetic"],
        )
        if self.output == "csv":
            buffer = io.StringIO()
            frame.to_csv(buffer, index=False, lineterminator="\n")
            return buffer.getvalue()
        if self.output == "json":
            return dumps(rows)
        return frame.to_string(index=False) + "\n"

    # === Documentos ===

    def render_document(self, data: Dict[str, Any], title: str = "") -> str:
        """Documento único (instância, cúspide, veredicto); CSV não se aplica e cai para JSON."""
        if self.output in ("json", "csv"):
            return dumps(data)
        lines = [title] if title else []
        lines.extend(self._text_lines(data, 0))
        return "\n".join(lines) + "\n"

    def _text_lines(self, data: Any, depth: int) -> List[str]:
        indent = "  " * depth
        lines = []
        if isinstance(data, dict):
            if set(data) == {"exact", "approx"}:
                return [f"{indent}{data['exact']}  (approx {data['approx']})"]
            for key, value in data.items():
                if isinstance(value, (dict, list)) and value:
                    lines.append(f"{indent}{key}:")
                    lines.extend(self._text_lines(value, depth + 1))
                else:
                    lines.append(f"{indent}{key}: {value}")
        elif isinstance(data, list):
            for item in data:
                if isinstance(item, (dict, list)):
                    lines.append(f"{indent}-")
                    lines.extend(self._text_lines(item, depth + 1))
                else:
                    lines.append(f"{indent}- {item}")
        else:
            lines.append(f"{indent}{data}")
        return lines
