"""Scalability score of a response-time curve.

A curve is a set of response times measured at increasing cluster sizes.
The ideal time at ``n`` nodes assumes perfect linear speedup from the first
measured point: ``IT_n = AT_first * n_first / n``.  The score is

    S = 1 - Gap - w_trend * (1 - Trend)

where ``Gap`` is the weighted sum of per-point gaps
``G_n = (AT_n - IT_n) / (IT_first - IT_n)`` and ``Trend`` compares the
achieved and ideal decrease between the last two points.  An ideal curve
scores 1, a flat curve scores 0, and curves that slow down with more nodes
go negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidArgument, NotFound

DEFAULT_SCHEDULE: tuple[int, ...] = (1, 2, 4, 6, 8)
WEIGHT_SUM_TOL = 1e-9


def check_schedule(nodes: Sequence[int]) -> tuple[int, ...]:
    nodes = tuple(nodes)
    if len(nodes) < 2:
        raise InvalidArgument(f"schedule needs at least 2 node counts, got {len(nodes)}")
    for n in nodes:
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise InvalidArgument(f"node counts must be positive integers, got {n!r}")
    if any(b <= a for a, b in zip(nodes, nodes[1:])):
        raise InvalidArgument(f"node counts must be strictly ascending, got {list(nodes)}")
    return nodes


@dataclass(frozen=True)
class MeasuredCurve:
    """Achieved response times (seconds) at each node count of a schedule."""

    nodes: tuple[int, ...]
    times: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", check_schedule(self.nodes))
        times = tuple(float(t) for t in self.times)
        if len(times) != len(self.nodes):
            raise InvalidArgument(
                f"{len(times)} times for {len(self.nodes)} schedule points"
            )
        for n, t in zip(self.nodes, times):
            if not (math.isfinite(t) and t > 0):
                raise InvalidArgument(f"time at {n} nodes must be positive and finite, got {t}")
        object.__setattr__(self, "times", times)

    @property
    def baseline(self) -> int:
        return self.nodes[0]

    def time_at(self, node_count: int) -> float:
        try:
            return self.times[self.nodes.index(node_count)]
        except ValueError:
            raise NotFound(f"{node_count} nodes is not in schedule {list(self.nodes)}") from None

    def scaled(self, k: float) -> "MeasuredCurve":
        return MeasuredCurve(self.nodes, tuple(k * t for t in self.times))

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class WeightVector:
    """Per-point gap weights (one per non-baseline point) plus the trend weight.

    All weights are non-negative and sum to 1.
    """

    gap_weights: tuple[float, ...]
    trend_weight: float

    def __post_init__(self):
        gw = tuple(float(w) for w in self.gap_weights)
        tw = float(self.trend_weight)
        if any(not math.isfinite(w) or w < 0 for w in (*gw, tw)):
            raise InvalidArgument("weights must be finite and non-negative")
        total = math.fsum(gw) + tw
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidArgument(f"weights must sum to 1, got {total!r}")
        object.__setattr__(self, "gap_weights", gw)
        object.__setattr__(self, "trend_weight", tw)

    @classmethod
    def equal(cls, n_points: int) -> "WeightVector":
        """Equal weights for a schedule of ``n_points`` (0.2 each for five points)."""
        if n_points < 2:
            raise InvalidArgument("need at least 2 schedule points")
        w = 1.0 / n_points
        return cls((w,) * (n_points - 1), 1.0 - w * (n_points - 1))

    def check_pairs(self, curve: MeasuredCurve) -> None:
        if len(self.gap_weights) != len(curve) - 1:
            raise InvalidArgument(
                f"{len(self.gap_weights)} gap weights for a curve with "
                f"{len(curve) - 1} non-baseline points"
            )

    def to_dict(self) -> dict:
        return {"gap_weights": list(self.gap_weights), "trend_weight": self.trend_weight}

    @classmethod
    def from_dict(cls, d: dict) -> "WeightVector":
        try:
            return cls(tuple(d["gap_weights"]), d["trend_weight"])
        except (KeyError, TypeError) as e:
            raise InvalidArgument(f"bad weights object: {e}") from None


@dataclass(frozen=True)
class ScoreBreakdown:
    score: float
    gap: float
    trend: float
    trend_weight: float
    per_point_gaps: tuple[tuple[int, float], ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "gap": self.gap,
            "trend": self.trend,
            "trend_weight": self.trend_weight,
            "per_point_gaps": [[n, g] for n, g in self.per_point_gaps],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScoreBreakdown":
        return cls(
            d["score"], d["gap"], d["trend"], d["trend_weight"],
            tuple((int(n), float(g)) for n, g in d["per_point_gaps"]),
        )


def ideal_time(curve: MeasuredCurve, node_count: int) -> float:
    """Response time at ``node_count`` under perfect linear speedup from the baseline."""
    if node_count < curve.baseline:
        raise InvalidArgument(
            f"node count {node_count} is below the baseline {curve.baseline}"
        )
    return curve.times[0] * curve.baseline / node_count


def gap_at(curve: MeasuredCurve, node_count: int) -> float:
    """Unaccomplished fraction of the ideal improvement at one schedule point.

    Negative when the point beats the ideal time.
    """
    if node_count == curve.baseline:
        raise InvalidArgument("gap is undefined at the baseline point")
    achieved = curve.time_at(node_count)
    it_n = ideal_time(curve, node_count)
    return (achieved - it_n) / (curve.times[0] - it_n)


def gap(curve: MeasuredCurve, weights: WeightVector) -> float:
    weights.check_pairs(curve)
    return math.fsum(w * gap_at(curve, n) for w, n in zip(weights.gap_weights, curve.nodes[1:]))


def trend(curve: MeasuredCurve) -> float:
    """Achieved over ideal decrease between the penultimate and last points."""
    if len(curve) < 2:
        raise InvalidArgument("trend needs at least 2 points")
    n_pen, n_last = curve.nodes[-2], curve.nodes[-1]
    at_pen, at_last = curve.times[-2], curve.times[-1]
    return (at_pen - at_last) / (ideal_time(curve, n_pen) - ideal_time(curve, n_last))


def scalability_score(curve: MeasuredCurve, weights: WeightVector | None = None) -> ScoreBreakdown:
    if weights is None:
        weights = WeightVector.equal(len(curve))
    weights.check_pairs(curve)
    per_point = tuple((n, gap_at(curve, n)) for n in curve.nodes[1:])
    g = math.fsum(w * gn for w, (_, gn) in zip(weights.gap_weights, per_point))
    t = trend(curve)
    score = 1.0 - g - weights.trend_weight * (1.0 - t)
    return ScoreBreakdown(score, g, t, weights.trend_weight, per_point)


def deviation_percent(score: float) -> float:
    """Distance from ideal scalability in percent; 0 for an ideal curve."""
    return (1.0 - score) * 100.0


def unexpected_variations(curve: MeasuredCurve) -> list[tuple[int, int]]:
    """Adjacent transitions where the response time strictly increases."""
    return [
        (a, b)
        for (a, ta), (b, tb) in zip(
            zip(curve.nodes, curve.times), zip(curve.nodes[1:], curve.times[1:])
        )
        if tb > ta
    ]
