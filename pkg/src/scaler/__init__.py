"""Scalability scoring and threshold-triggered configuration tuning for distributed jobs."""

from .engine import AdaptationConfig, AdaptationResult, TrialRecord, adapt, derive_threshold, measure_curve, should_adapt
from .errors import AdaptationAborted, HarnessTimeout, InvalidArgument, NotFound, ParseError, RunFailure, ScalerError
from .metrics import (
    MeasuredCurve,
    ScoreBreakdown,
    WeightVector,
    deviation_percent,
    gap,
    gap_at,
    ideal_time,
    scalability_score,
    trend,
    unexpected_variations,
)
from .params import CPV, ParameterSpace, ParameterSpec, default_cpv, parse_cpv, serialize_cpv, space_size, with_option
from .simulator import SimExecutor, SimModel, sim_executor, sim_time

__version__ = "0.1.0"
