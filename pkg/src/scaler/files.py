"""Readers for the CSV and JSON input files used by the command line."""

from __future__ import annotations

import csv
import json
import math
from collections import OrderedDict
from pathlib import Path

from .analysis import ScoredCase
from .errors import InvalidArgument, ParseError
from .metrics import MeasuredCurve, WeightVector


def _rows(path, required: tuple[str, ...], optional: tuple[str, ...] = ()):
    """Yield ``(line_number, row_dict)`` after checking the header."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError("empty file", 1)
        header = [h.strip() for h in header]
        missing = [c for c in required if c not in header]
        if missing:
            raise ParseError(f"header must contain {', '.join(required)}; missing {missing}", 1)
        for row in reader:
            line = reader.line_num
            if not any(cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", line)
            yield line, {h: cell.strip() for h, cell in zip(header, row)}


def _int(text: str, what: str, line: int) -> int:
    try:
        v = int(text)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {text!r}", line) from None
    if v < 1:
        raise ParseError(f"{what} must be >= 1, got {v}", line)
    return v


def _float(text: str, what: str, line: int, positive: bool = False) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"{what} must be a number, got {text!r}", line) from None
    if not math.isfinite(v):
        raise ParseError(f"{what} must be finite, got {text!r}", line)
    if positive and v <= 0:
        raise ParseError(f"{what} must be positive, got {text!r}", line)
    return v


def _build_curve(points: list[tuple[int, int, float]]) -> MeasuredCurve:
    # repeated rows for one node count are averaged; they must be adjacent
    grouped: OrderedDict[int, list[float]] = OrderedDict()
    last = None
    for line, n, t in points:
        if last is not None and n < last:
            raise ParseError(f"node counts must be ascending ({n} after {last})", line)
        grouped.setdefault(n, []).append(t)
        last = n
    if len(grouped) < 2:
        raise ParseError("a curve needs at least 2 distinct node counts")
    return MeasuredCurve(tuple(grouped), tuple(math.fsum(v) / len(v) for v in grouped.values()))


def load_curve(path: str | Path) -> MeasuredCurve:
    """Single curve CSV with header ``nodes,time_sec``."""
    points = []
    for line, row in _rows(path, ("nodes", "time_sec")):
        points.append((line, _int(row["nodes"], "nodes", line),
                       _float(row["time_sec"], "time_sec", line, positive=True)))
    return _build_curve(points)


def load_curves(path: str | Path) -> list[tuple[str, MeasuredCurve]]:
    """Curve collection CSV with header ``case_id,nodes,time_sec``.

    A file without a ``case_id`` column is read as one curve named after the file.
    """
    with open(path, newline="") as fh:
        header = fh.readline()
    if "case_id" not in [h.strip() for h in header.split(",")]:
        return [(Path(path).stem, load_curve(path))]
    by_case: OrderedDict[str, list] = OrderedDict()
    for line, row in _rows(path, ("case_id", "nodes", "time_sec")):
        by_case.setdefault(row["case_id"], []).append(
            (line, _int(row["nodes"], "nodes", line),
             _float(row["time_sec"], "time_sec", line, positive=True)))
    if not by_case:
        raise ParseError("no curves in file")
    return [(cid, _build_curve(pts)) for cid, pts in by_case.items()]


def load_cases(path: str | Path) -> list[ScoredCase]:
    """Scored-case CSV: ``case_id,parameter_id,default_score,modified_score``."""
    cases = []
    for line, row in _rows(path, ("case_id", "parameter_id", "default_score", "modified_score")):
        cases.append(ScoredCase(row["case_id"], row["parameter_id"],
                                _float(row["default_score"], "default_score", line),
                                _float(row["modified_score"], "modified_score", line)))
    return cases


def load_scores(path: str | Path) -> list[tuple[str, float]]:
    """Score list CSV with a ``score`` column and an optional ``case_id`` column."""
    out = []
    for line, row in _rows(path, ("score",)):
        out.append((row.get("case_id", str(line)), _float(row["score"], "score", line)))
    return out


def parse_weights(text: str) -> WeightVector:
    """Weights from a JSON file path or an inline comma list (trend weight last)."""
    p = Path(text)
    if p.is_file():
        try:
            return WeightVector.from_dict(json.loads(p.read_text()))
        except json.JSONDecodeError as e:
            raise ParseError(f"{text}: {e.msg}", e.lineno) from None
    try:
        values = [float(x) for x in text.split(",")]
    except ValueError:
        raise InvalidArgument(f"--weights must be a JSON file or comma-separated numbers: {text!r}") from None
    if len(values) < 2:
        raise InvalidArgument("--weights needs at least one gap weight and a trend weight")
    return WeightVector(tuple(values[:-1]), values[-1])


def parse_schedule(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InvalidArgument(f"--schedule must be comma-separated integers: {text!r}") from None
