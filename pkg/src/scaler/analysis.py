"""Batch analysis over many curves and scores, and report emission."""

from __future__ import annotations

import csv
import io
import json
import math
import re
import statistics
from decimal import Decimal
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import InvalidArgument
from .metrics import MeasuredCurve, ScoreBreakdown, deviation_percent, ideal_time, unexpected_variations

REPORT_FORMATS = ("json", "csv", "tsv-plot")


def natural_key(s: str):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", s)]


@dataclass(frozen=True)
class ScoredCase:
    case_id: str
    parameter_id: str
    default_score: float
    modified_score: float

    def __post_init__(self):
        if not (math.isfinite(self.default_score) and math.isfinite(self.modified_score)):
            raise InvalidArgument(f"{self.case_id}/{self.parameter_id}: scores must be finite")

    @property
    def impact(self) -> float:
        return abs(self.default_score - self.modified_score)


@dataclass(frozen=True)
class RankingEntry:
    parameter_id: str
    impact: float
    rank: int
    n_cases: int

    def to_dict(self) -> dict:
        return {"parameter_id": self.parameter_id, "impact": self.impact,
                "rank": self.rank, "n_cases": self.n_cases}


@dataclass(frozen=True)
class Ranking:
    entries: tuple[RankingEntry, ...]
    excluded: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries],
                "warnings": [f"parameter {p} has no matching cases" for p in self.excluded]}


def rank_parameters(
    cases: Iterable[ScoredCase],
    group_filter: Callable[[ScoredCase], bool] | None = None,
) -> Ranking:
    """Rank parameters by mean |default - modified| score over matching cases.

    Scores are aggregated in decimal on their shortest repr, so values read
    from two-decimal tables tie exactly when their means agree.  Ties go to
    the lower parameter id (natural order, so P2 before P10).  Parameters
    with no matching case are listed in ``excluded``.
    """
    cases = list(cases)
    all_params = sorted({c.parameter_id for c in cases}, key=natural_key)
    impacts: dict[str, list[Decimal]] = {p: [] for p in all_params}
    for c in cases:
        if group_filter is None or group_filter(c):
            diff = Decimal(repr(c.default_score)) - Decimal(repr(c.modified_score))
            impacts[c.parameter_id].append(abs(diff))
    scored = [(p, sum(v) / len(v), len(v)) for p, v in impacts.items() if v]
    excluded = tuple(p for p, v in impacts.items() if not v)
    scored.sort(key=lambda t: (-t[1], natural_key(t[0])))
    return Ranking(tuple(RankingEntry(p, float(imp), i + 1, n) for i, (p, imp, n) in enumerate(scored)),
                   excluded)


@dataclass(frozen=True)
class TransitionCount:
    from_node: int
    to_node: int
    count: int
    total: int

    @property
    def percent(self) -> float:
        return 100.0 * self.count / self.total

    def to_dict(self) -> dict:
        return {"from_node": self.from_node, "to_node": self.to_node,
                "count": self.count, "total": self.total, "percent": self.percent}


@dataclass(frozen=True)
class VariationReport:
    transitions: tuple[TransitionCount, ...]
    per_curve: tuple[tuple[str, tuple[tuple[int, int], ...]], ...]

    def to_dict(self) -> dict:
        return {
            "transitions": [t.to_dict() for t in self.transitions],
            "curves": [{"case_id": cid, "unexpected": [list(tr) for tr in trs]}
                       for cid, trs in self.per_curve],
        }


def variation_report(curves: Sequence[tuple[str, MeasuredCurve]]) -> VariationReport:
    """Count curves whose time strictly rises at each adjacent transition."""
    if not curves:
        raise InvalidArgument("need at least one curve")
    schedule = curves[0][1].nodes
    for cid, c in curves:
        if c.nodes != schedule:
            raise InvalidArgument(f"curve {cid!r} uses schedule {list(c.nodes)}, expected {list(schedule)}")
    per_curve = tuple((cid, tuple(unexpected_variations(c))) for cid, c in curves)
    transitions = tuple(
        TransitionCount(a, b, sum((a, b) in trs for _, trs in per_curve), len(curves))
        for a, b in zip(schedule, schedule[1:])
    )
    return VariationReport(transitions, per_curve)


@dataclass(frozen=True)
class Summary:
    n: int
    mean: float
    mean_deviation: float
    min: float
    max: float
    median: float

    def to_dict(self) -> dict:
        return {"n": self.n, "mean": self.mean, "mean_deviation": self.mean_deviation,
                "min": self.min, "max": self.max, "median": self.median}


def summarize(scores: Sequence[tuple[str, float]] | Sequence[float]) -> Summary:
    values = [s[1] if isinstance(s, tuple) else s for s in scores]
    if not values:
        raise InvalidArgument("need at least one score")
    return Summary(
        n=len(values),
        mean=statistics.fmean(values),
        mean_deviation=statistics.fmean(deviation_percent(v) for v in values),
        min=min(values),
        max=max(values),
        median=statistics.median(values),
    )


# -- report emission ------------------------------------------------------

def _as_curves(obj) -> list[tuple[str, MeasuredCurve]] | None:
    if isinstance(obj, MeasuredCurve):
        return [("curve", obj)]
    if isinstance(obj, (list, tuple)) and obj and all(
        isinstance(x, tuple) and len(x) == 2 and isinstance(x[1], MeasuredCurve) for x in obj
    ):
        return list(obj)
    return None


def _curve_dict(c: MeasuredCurve) -> dict:
    return {"nodes": list(c.nodes), "time_sec": list(c.times)}


def to_jsonable(obj):
    curves = _as_curves(obj)
    if curves is not None:
        return [{"case_id": cid, **_curve_dict(c)} for cid, c in curves]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise InvalidArgument(f"cannot report a {type(obj).__name__}")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _to_csv(obj) -> str:
    from .engine import AdaptationResult

    curves = _as_curves(obj)
    if curves is not None:
        return _csv(("case_id", "nodes", "time_sec"),
                    [(cid, n, t) for cid, c in curves for n, t in zip(c.nodes, c.times)])
    if isinstance(obj, ScoreBreakdown):
        rows = [("score", "", obj.score), ("gap", "", obj.gap), ("trend", "", obj.trend),
                ("trend_weight", "", obj.trend_weight)]
        rows += [("gap_at", n, g) for n, g in obj.per_point_gaps]
        return _csv(("metric", "nodes", "value"), rows)
    if isinstance(obj, Ranking):
        return _csv(("rank", "parameter_id", "impact", "n_cases"),
                    [(e.rank, e.parameter_id, e.impact, e.n_cases) for e in obj.entries])
    if isinstance(obj, VariationReport):
        return _csv(("from_node", "to_node", "count", "total", "percent"),
                    [(t.from_node, t.to_node, t.count, t.total, t.percent) for t in obj.transitions])
    if isinstance(obj, Summary):
        return _csv(("metric", "value"), list(obj.to_dict().items()))
    if isinstance(obj, AdaptationResult):
        return _csv(("param_id", "option", "cpv", "precheck_trend", "pruned", "score", "calls", "improved"),
                    [tuple("" if v is None else v for v in t.to_dict().values()) for t in obj.trials])
    raise InvalidArgument(f"no csv layout for {type(obj).__name__}")


def _to_tsv_plot(obj) -> str:
    curves = _as_curves(obj)
    if curves is None:
        raise InvalidArgument("tsv-plot output needs one or more curves")
    blocks = []
    for cid, c in curves:
        achieved = "\n".join(f"{n}\t{t!r}" for n, t in zip(c.nodes, c.times))
        ideal = "\n".join(f"{n}\t{ideal_time(c, n)!r}" for n in c.nodes)
        blocks.append(f"# {cid} achieved\nnodes\ttime_sec\n{achieved}\n")
        blocks.append(f"# {cid} ideal\nnodes\ttime_sec\n{ideal}\n")
    # blank-line separated blocks, as gnuplot's `index` expects
    return "\n\n".join(blocks)


def emit_report(obj, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(to_jsonable(obj), indent=2) + "\n"
    if fmt == "csv":
        return _to_csv(obj)
    if fmt == "tsv-plot":
        return _to_tsv_plot(obj)
    raise InvalidArgument(f"unknown report format {fmt!r}; choose from {REPORT_FORMATS}")


def parse_tsv_plot(text: str) -> dict[str, list[tuple[int, float]]]:
    """Read blocks written by ``emit_report(..., "tsv-plot")`` back into ``{title: points}``."""
    out: dict[str, list[tuple[int, float]]] = {}
    title = None
    for line in text.splitlines():
        if line.startswith("# "):
            title = line[2:]
            out[title] = []
        elif line and not line.startswith("nodes") and title is not None:
            n, t = line.split("\t")
            out[title].append((int(n), float(t)))
    return out
