# -*- coding: utf-8 -*-
"""
Result tables and their CSV / JSON artifacts.
"""

import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import TOOL_VERSION, source_date_epoch
from helpers import InvalidArgumentError

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
SIGNIFICANT_DIGITS = 15


@dataclass(frozen=True)
class ExperimentConfig:
    subcommand: str
    parameters: Dict[str, Any]
    out: Optional[str] = None
    fmt: str = "csv"
    verbose: bool = False


@dataclass
class ResultTable:
    columns: List[str]
    rows: List[List[Any]]
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        width = len(self.columns)
        for index, row in enumerate(self.rows):
            if len(row) != width:
                raise InvalidArgumentError(f"row {index} has {len(row)} cells, expected {width}")

    def column(self, name: str) -> List[Any]:
        position = self.columns.index(name)
        return [row[position] for row in self.rows]


def build_meta(subcommand: str, parameters: Dict[str, Any], fmt: str, extra: Optional[Dict] = None) -> Dict[str, Any]:
    """Metadata block: exact config echo, tool version, reproducible timestamp."""
    stamp = datetime.fromtimestamp(source_date_epoch(), tz=timezone.utc)
    meta = {
        "config": {"subcommand": subcommand, "parameters": dict(parameters), "format": fmt},
        "tool_version": TOOL_VERSION,
        "timestamp": stamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
    }
    if extra:
        meta.update(extra)
    return meta


def format_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{SIGNIFICANT_DIGITS}g")
    if value is None:
        return ""
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(format(value, f".{SIGNIFICANT_DIGITS}g"))
    if isinstance(value, dict):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def render(table: ResultTable, fmt: str) -> str:
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_cell(v) for v in row])
        return buffer.getvalue()
    if fmt == "json":
        payload = {
            "meta": _json_value(table.meta),
            "columns": list(table.columns),
            "rows": [_json_value(list(row)) for row in table.rows],
        }
        return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    raise InvalidArgumentError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def emit_results(table: ResultTable, fmt: str = "csv", path: Optional[str] = None) -> None:
    """Write the table to path (stdout when path is None or '-')."""
    text = render(table, fmt)
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        logger.error(f"Cannot write results to {path}: {e}")
        raise OSError(f"cannot write results to {path}: {e.strerror or e}") from e
    logger.info(f"Wrote {len(table.rows)} rows to {path} ({fmt})")


def rows_from_dicts(records: Sequence[Dict[str, Any]], columns: Sequence[str]) -> List[List[Any]]:
    return [[record[c] for c in columns] for record in records]
