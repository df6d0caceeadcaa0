"""Deterministic synthetic cluster used as a stand-in for a real system.

Response time follows an Amdahl-style law with a linear per-node overhead:

    T = base * Mc * (f_s + (1 - f_s) / n) + c * Mo * n

``Mc`` and ``Mo`` are products of per-(parameter, option) multipliers over
the CPV, so each parameter independently scales the compute or the
coordination cost.  Optional multiplicative noise is drawn uniformly from
``[-noise_scale, noise_scale]`` with a seed derived from
``(seed, cpv, n, repeat)``: the same call always returns the same time.
"""

from __future__ import annotations

import json
import math
import random
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from .errors import InvalidArgument, NotFound, ParseError
from .params import CPV, option_label, serialize_cpv

Multipliers = dict[str, dict[str, float]]


def _check_multipliers(name: str, m) -> Multipliers:
    if not isinstance(m, dict):
        raise InvalidArgument(f"{name} must be a mapping of parameter id to {{label: factor}}")
    out: Multipliers = {}
    for pid, per_opt in m.items():
        if not isinstance(per_opt, dict):
            raise InvalidArgument(f"{name}[{pid}] must be a mapping of option label to factor")
        out[pid] = {}
        for label, factor in per_opt.items():
            factor = float(factor)
            if not (math.isfinite(factor) and factor > 0):
                raise InvalidArgument(f"{name}[{pid}][{label}] must be positive, got {factor}")
            out[pid][label] = factor
    return out


@dataclass(frozen=True)
class SimModel:
    base_time: float
    serial_fraction: float = 0.0
    overhead_per_node: float = 0.0
    compute_multipliers: Multipliers = field(default_factory=dict)
    overhead_multipliers: Multipliers = field(default_factory=dict)
    noise_scale: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.base_time) and self.base_time > 0):
            raise InvalidArgument("base_time must be positive")
        if not 0.0 <= self.serial_fraction <= 1.0:
            raise InvalidArgument("serial_fraction must lie in [0, 1]")
        if not (math.isfinite(self.overhead_per_node) and self.overhead_per_node >= 0):
            raise InvalidArgument("overhead_per_node must be >= 0")
        # (1 + eps) must stay positive for every draw
        if not 0.0 <= self.noise_scale < 1.0:
            raise InvalidArgument("noise_scale must lie in [0, 1)")
        object.__setattr__(self, "compute_multipliers",
                           _check_multipliers("compute_multipliers", self.compute_multipliers))
        object.__setattr__(self, "overhead_multipliers",
                           _check_multipliers("overhead_multipliers", self.overhead_multipliers))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SimModel":
        known = {"base_time", "serial_fraction", "overhead_per_node", "compute_multipliers",
                 "overhead_multipliers", "noise_scale", "seed"}
        extra = set(d) - known - {"description"}
        if extra:
            raise InvalidArgument(f"unknown model fields {sorted(extra)}")
        if "base_time" not in d:
            raise InvalidArgument("model is missing base_time")
        return cls(**{k: v for k, v in d.items() if k in known})


def load_model(path: str | Path) -> SimModel:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: {e.msg}", e.lineno) from None
    if not isinstance(data, dict):
        raise InvalidArgument("model file must hold a JSON object")
    return SimModel.from_dict(data)


def builtin_models() -> dict[str, SimModel]:
    """Shipped fixture models keyed by file stem."""
    root = resources.files("scaler") / "data" / "models"
    out = {}
    for res in sorted(root.iterdir(), key=lambda r: r.name):
        if res.name.endswith(".json"):
            out[res.name[:-5]] = SimModel.from_dict(json.loads(res.read_text()))
    return out


def builtin_model(name: str) -> SimModel:
    models = builtin_models()
    if name not in models:
        raise NotFound(f"no built-in model {name!r}")
    return models[name]


def _product(mults: Multipliers, cpv: CPV) -> float:
    m = 1.0
    for pid, idx in cpv.items():
        m *= mults.get(pid, {}).get(option_label(idx), 1.0)
    return m


def noise_draw(model: SimModel, cpv: CPV, node_count: int, repeat_index: int) -> float:
    if model.noise_scale == 0.0:
        return 0.0
    # str seeds are hashed with SHA-512, so draws are stable across processes
    rng = random.Random(f"{model.seed}|{serialize_cpv(cpv)}|{node_count}|{repeat_index}")
    return rng.uniform(-model.noise_scale, model.noise_scale)


def sim_time(model: SimModel, cpv: CPV, node_count: int, repeat_index: int = 0) -> float:
    if node_count < 1:
        raise InvalidArgument(f"node_count must be >= 1, got {node_count}")
    mc = _product(model.compute_multipliers, cpv)
    mo = _product(model.overhead_multipliers, cpv)
    f = model.serial_fraction
    t = model.base_time * mc * (f + (1.0 - f) / node_count) + model.overhead_per_node * mo * node_count
    return t * (1.0 + noise_draw(model, cpv, node_count, repeat_index))


class SimExecutor:
    """Executor backed by :func:`sim_time`.

    Each ``(cpv, n)`` pair gets its own repeat counter so the k-th call for a
    pair always sees repeat index k.  ``reset`` starts the counters over.
    """

    def __init__(self, model: SimModel):
        self.model = model
        self._repeats: dict[tuple[CPV, int], int] = defaultdict(int)

    def reset(self) -> None:
        self._repeats.clear()

    def execute(self, cpv: CPV, node_count: int) -> float:
        key = (cpv, node_count)
        k = self._repeats[key]
        self._repeats[key] = k + 1
        return sim_time(self.model, cpv, node_count, k)


def sim_executor(model: SimModel) -> SimExecutor:
    return SimExecutor(model)
