"""Reading joint distributions and c-q states from disk, and writing reports."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .cq import CQState
from .errors import DomainError, ParseError
from .prob_core import JointDistribution

SIG_DIGITS = 12


def load_input(path):
    """Parse ``path`` as a :class:`JointDistribution` or a :class:`CQState`.

    JSON objects carrying ``blocks`` are c-q states, objects carrying ``matrix``
    (or bare nested lists) are joints. Any other extension is read as CSV, one
    row of the joint per line.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    if path.suffix.lower() == ".json" or text.lstrip().startswith(("{", "[")):
        return parse_json(text)
    return parse_csv(text)


def parse_json(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    try:
        if isinstance(data, list):
            return JointDistribution(np.asarray(data, dtype=float))
        if not isinstance(data, dict):
            raise ParseError("expected a JSON object or a nested list")
        if "blocks" in data:
            return CQState.from_dict(data)
        if "matrix" in data:
            return JointDistribution.from_dict(data)
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise ParseError(f"bad input structure: {exc}") from None
    raise ParseError("JSON object has neither 'matrix' nor 'blocks'")


def parse_csv(text: str) -> JointDistribution:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].lstrip().startswith("#")]
    try:
        values = [[float(cell) for cell in row] for row in rows]
    except ValueError as exc:
        raise ParseError(f"non-numeric CSV cell: {exc}") from None
    if not values or len({len(r) for r in values}) != 1:
        raise ParseError("CSV must be a non-empty rectangular table")
    return JointDistribution(np.asarray(values))


def round_sig(value, digits: int = SIG_DIGITS):
    """Recursively round floats to ``digits`` significant digits; infinities become ``"inf"``."""
    if isinstance(value, dict):
        return {k: round_sig(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_sig(v, digits) for v in value]
    if isinstance(value, np.ndarray):
        return round_sig(value.tolist(), digits)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return float(f"{value:.{digits}g}")
    return value


def dump_json(payload) -> str:
    return json.dumps(round_sig(payload), indent=2)


def dump_csv(rows: list) -> str:
    """Rows are dicts sharing keys; the first row fixes the column order."""
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()


def _fmt(v):
    v = round_sig(v)
    return f"{v:.{SIG_DIGITS}g}" if isinstance(v, float) else v
