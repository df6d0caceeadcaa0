"""Threshold-triggered sequential parameter search for scalability.

``adapt`` measures the default configuration first.  If its score is not
above the threshold it walks the parameters in space order, trying each
non-default option on top of the current working CPV.  A candidate whose
end-of-curve trend (from three measured points) is negative is dropped
without measuring the rest of the curve.  Candidates that beat the best
score so far are kept in the working CPV; the search stops as soon as one
scores above the threshold.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Callable, Protocol, Sequence

from .errors import AdaptationAborted, InvalidArgument, RunFailure
from .metrics import (
    DEFAULT_SCHEDULE,
    MeasuredCurve,
    WeightVector,
    check_schedule,
    scalability_score,
    trend,
)
from .params import CPV, ParameterSpace, default_cpv, option_label, serialize_cpv, with_option

DEFAULT_THRESHOLD = 0.58
DEFAULT_INCREMENT = 0.0365
DEFAULT_REPEATS = 3


class Executor(Protocol):
    def execute(self, cpv: CPV, node_count: int) -> float: ...


@dataclass(frozen=True)
class AdaptationConfig:
    threshold: float = DEFAULT_THRESHOLD
    increment: float = DEFAULT_INCREMENT
    repeats: int = DEFAULT_REPEATS
    schedule: tuple[int, ...] = DEFAULT_SCHEDULE
    weights: WeightVector | None = None

    def __post_init__(self):
        schedule = check_schedule(self.schedule)
        if len(schedule) < 3:
            raise InvalidArgument("adaptation needs a schedule of at least 3 node counts")
        if isinstance(self.repeats, bool) or not isinstance(self.repeats, int) or self.repeats < 1:
            raise InvalidArgument(f"repeats must be a positive integer, got {self.repeats!r}")
        weights = self.weights or WeightVector.equal(len(schedule))
        if len(weights.gap_weights) != len(schedule) - 1:
            raise InvalidArgument("weights do not match the schedule length")
        object.__setattr__(self, "schedule", schedule)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "threshold", float(self.threshold))
        object.__setattr__(self, "increment", float(self.increment))

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "increment": self.increment,
            "repeats": self.repeats,
            "schedule": list(self.schedule),
            "weights": self.weights.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AdaptationConfig":
        if not isinstance(d, dict):
            raise InvalidArgument("adaptation config must be a JSON object")
        extra = set(d) - {"threshold", "increment", "repeats", "schedule", "weights"}
        if extra:
            raise InvalidArgument(f"unknown config fields {sorted(extra)}")
        kw = dict(d)
        if "schedule" in kw:
            kw["schedule"] = tuple(kw["schedule"])
        if kw.get("weights") is not None:
            kw["weights"] = WeightVector.from_dict(kw["weights"])
        return cls(**kw)


@dataclass(frozen=True)
class TrialRecord:
    param_id: str
    option_index: int
    cpv: str
    precheck_trend: float
    pruned: bool
    score: float | None
    calls: int
    improved: bool = False

    def to_dict(self) -> dict:
        return {
            "param_id": self.param_id,
            "option": option_label(self.option_index),
            "cpv": self.cpv,
            "precheck_trend": self.precheck_trend,
            "pruned": self.pruned,
            "score": self.score,
            "calls": self.calls,
            "improved": self.improved,
        }


@dataclass(frozen=True)
class AdaptationResult:
    optimal_cpv: CPV
    optimal_score: float
    default_score: float
    trials: tuple[TrialRecord, ...]
    total_calls: int
    converged_above_threshold: bool
    triggered: bool

    @property
    def iterations(self) -> int:
        """Full-curve evaluations after the default measurement."""
        return sum(1 for t in self.trials if not t.pruned)

    def to_dict(self) -> dict:
        return {
            "optimal_cpv": serialize_cpv(self.optimal_cpv),
            "optimal_score": self.optimal_score,
            "default_score": self.default_score,
            "triggered": self.triggered,
            "converged_above_threshold": self.converged_above_threshold,
            "iterations": self.iterations,
            "total_calls": self.total_calls,
            "trials": [t.to_dict() for t in self.trials],
        }


@dataclass
class _Counter:
    """Forwards calls to an executor and counts them."""

    executor: Executor
    calls: int = 0

    def execute(self, cpv: CPV, node_count: int) -> float:
        self.calls += 1
        return self.executor.execute(cpv, node_count)


def _measure_points(executor, cpv: CPV, nodes: Sequence[int], repeats: int) -> dict[int, float]:
    out = {}
    for n in nodes:
        samples = []
        for r in range(repeats):
            try:
                t = float(executor.execute(cpv, n))
            except RunFailure as e:
                raise RunFailure(f"cpv {serialize_cpv(cpv)}, {n} nodes, repeat {r}: {e}") from e
            except Exception as e:
                raise RunFailure(
                    f"cpv {serialize_cpv(cpv)}, {n} nodes, repeat {r}: "
                    f"{type(e).__name__}: {e}"
                ) from e
            if not (math.isfinite(t) and t > 0):
                raise RunFailure(
                    f"cpv {serialize_cpv(cpv)}, {n} nodes, repeat {r}: "
                    f"executor returned non-positive time {t!r}"
                )
            samples.append(t)
        out[n] = statistics.fmean(samples)
    return out


def measure_curve(executor: Executor, cpv: CPV, schedule: Sequence[int], repeats: int) -> MeasuredCurve:
    """Mean of ``repeats`` runs at every schedule point, ascending, repeats innermost."""
    schedule = check_schedule(schedule)
    if repeats < 1:
        raise InvalidArgument("repeats must be >= 1")
    times = _measure_points(executor, cpv, schedule, repeats)
    return MeasuredCurve(schedule, tuple(times[n] for n in schedule))


def derive_threshold(scores: Sequence[float], increment: float = DEFAULT_INCREMENT) -> float:
    if len(scores) == 0:
        raise InvalidArgument("need at least one score")
    return statistics.fmean(scores) + increment


def should_adapt(current_score: float, threshold: float) -> bool:
    return current_score <= threshold


def adapt(
    executor: Executor,
    space: ParameterSpace,
    config: AdaptationConfig | None = None,
    on_trial: Callable[[TrialRecord], None] | None = None,
) -> AdaptationResult:
    """Search for a CPV scoring above ``config.threshold``.

    ``on_trial`` is called after every trial, so callers can stream a trace.
    Executor failures raise :class:`AdaptationAborted` with the trials done so far.
    """
    config = config or AdaptationConfig()
    schedule, repeats, weights = config.schedule, config.repeats, config.weights
    precheck_nodes = (schedule[0], schedule[-2], schedule[-1])
    rest_nodes = schedule[1:-2]

    reset = getattr(executor, "reset", None)
    if callable(reset):
        reset()
    counter = _Counter(executor)
    trials: list[TrialRecord] = []

    working = default_cpv(space)
    try:
        default_curve = measure_curve(counter, working, schedule, repeats)
    except RunFailure as e:
        raise AdaptationAborted(str(e), trials) from e
    s_default = scalability_score(default_curve, weights).score

    def result(cpv, score, triggered):
        return AdaptationResult(cpv, score, s_default, tuple(trials), counter.calls,
                                score > config.threshold, triggered)

    if not should_adapt(s_default, config.threshold):
        return result(working, s_default, False)

    best_cpv, best_score = working, s_default
    for spec in space.params:
        for opt in range(1, len(spec.options)):
            candidate = with_option(space, working, spec.id, opt)
            before = counter.calls
            try:
                pts = _measure_points(counter, candidate, precheck_nodes, repeats)
                pre_trend = trend(MeasuredCurve(precheck_nodes, tuple(pts[n] for n in precheck_nodes)))
                if pre_trend < 0:
                    rec = TrialRecord(spec.id, opt, serialize_cpv(candidate), pre_trend,
                                      True, None, counter.calls - before)
                else:
                    pts.update(_measure_points(counter, candidate, rest_nodes, repeats))
                    curve = MeasuredCurve(schedule, tuple(pts[n] for n in schedule))
                    score = scalability_score(curve, weights).score
                    improved = score > best_score
                    rec = TrialRecord(spec.id, opt, serialize_cpv(candidate), pre_trend,
                                      False, score, counter.calls - before, improved)
            except RunFailure as e:
                raise AdaptationAborted(str(e), trials, s_default) from e
            trials.append(rec)
            if on_trial is not None:
                on_trial(rec)
            if rec.improved:
                best_cpv, best_score = candidate, rec.score
                working = candidate
                if best_score > config.threshold:
                    return result(best_cpv, best_score, True)
    return result(best_cpv, best_score, True)
