"""
Report emission.

JSON is the canonical form; CSV is a flat projection of the report's rows.
Reports carry no timestamps or host data, so equal configurations give
byte-identical output.
"""

import csv
import io
import json
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np

from ..utils.errors import ValidationError
from ..utils.logger import get_logger

SCHEMA_VERSION = "wildtwist.report/1"

FORMATS = ("json", "csv")


def _encode(value: Any) -> Any:
    """json.dumps fallback for numpy, complex and rational values."""
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _flatten(data: Any, prefix: str = "") -> Dict[str, Any]:
    row: Dict[str, Any] = {}
    if isinstance(data, dict):
        for key, value in data.items():
            name = f"{prefix}.{key}" if prefix else str(key)
            row.update(_flatten(value, name))
    elif isinstance(data, (list, tuple)) and data and isinstance(data[0], dict):
        for i, item in enumerate(data):
            row.update(_flatten(item, f"{prefix}[{i}]"))
    elif isinstance(data, (list, tuple)):
        row[prefix] = json.dumps(data, default=_encode)
    else:
        row[prefix] = data
    return row


class ReportWriter:
    """Serializes subcommand results into the report envelope."""

    def __init__(self, fmt: str = "json", output_path: Optional[str] = None):
        """
        Args:
            fmt: json or csv
            output_path: Destination file; None writes to standard output
        """
        if fmt not in FORMATS:
            raise ValidationError(f"--format must be one of {FORMATS}, got '{fmt}'")
        self.fmt = fmt
        self.output_path = output_path
        self.logger = get_logger()

    @staticmethod
    def envelope(subcommand: str, parameters: Dict[str, Any], result: Any) -> Dict[str, Any]:
        """The canonical report document."""
        return {"schema": SCHEMA_VERSION, "subcommand": subcommand,
                "parameters": parameters, "result": result}

    def render_json(self, report: Dict[str, Any]) -> str:
        return json.dumps(report, indent=2, default=_encode) + "\n"

    def rows(self, report: Dict[str, Any]) -> List[Dict[str, Any]]:
        """
        CSV rows: one per entry of result["rows"] when present, else one
        flattened row for the whole result. Parameters prefix every row.
        """
        result = json.loads(json.dumps(report["result"], default=_encode))
        parameters = _flatten(report["parameters"], "param")
        if isinstance(result, dict) and isinstance(result.get("rows"), list):
            entries = [_flatten(row) for row in result["rows"]]
        else:
            entries = [_flatten(result)]
        return [{**parameters, **entry} for entry in entries]

    def render_csv(self, report: Dict[str, Any]) -> str:
        rows = self.rows(report)
        columns: List[str] = []
        for row in rows:
            columns.extend(key for key in row if key not in columns)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        return buffer.getvalue()

    def render(self, report: Dict[str, Any]) -> str:
        return self.render_json(report) if self.fmt == "json" else self.render_csv(report)

    def write(self, subcommand: str, parameters: Dict[str, Any], result: Any) -> str:
        """
        Render and emit one report.

        Returns:
            The rendered text
        """
        text = self.render(self.envelope(subcommand, parameters, result))
        if self.output_path is None:
            print(text, end="")
            return text
        directory = os.path.dirname(self.output_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(self.output_path, 'w', encoding='utf-8', newline='') as file:
            file.write(text)
        self.logger.info(f"Report written to {self.output_path}", subcommand)
        return text
