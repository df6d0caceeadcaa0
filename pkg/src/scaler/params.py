"""Tunable parameters, their discrete value options, and CPVs.

A CPV (combination of parameter values) assigns one option index to every
parameter.  Index 0 is always the parameter's default.  The canonical text
form labels option indices with letters: ``P1=A,P2=B,...``.
"""

from __future__ import annotations

import json
import math
import string
from dataclasses import dataclass
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Iterator

from .errors import InvalidArgument, NotFound, ParseError

LABELS = string.ascii_uppercase


def option_label(index: int) -> str:
    return LABELS[index]


def label_index(label: str) -> int:
    if len(label) != 1 or label not in LABELS:
        raise ParseError(f"unknown option label {label!r}")
    return LABELS.index(label)


@dataclass(frozen=True)
class ParameterSpec:
    id: str
    name: str
    options: tuple[str, ...]

    def __post_init__(self):
        opts = tuple(str(o) for o in self.options)
        if not self.id or any(c in self.id for c in ",= "):
            raise InvalidArgument(f"bad parameter id {self.id!r}")
        if len(opts) < 2:
            raise InvalidArgument(f"{self.id}: need at least 2 options")
        if len(opts) > len(LABELS):
            raise InvalidArgument(f"{self.id}: at most {len(LABELS)} options")
        if len(set(opts)) != len(opts):
            raise InvalidArgument(f"{self.id}: options must be distinct")
        object.__setattr__(self, "options", opts)

    @property
    def default(self) -> str:
        return self.options[0]


@dataclass(frozen=True)
class CPV:
    """One option index per parameter, aligned with a space's parameter order."""

    ids: tuple[str, ...]
    indices: tuple[int, ...]

    def __post_init__(self):
        if len(self.ids) != len(self.indices):
            raise InvalidArgument("ids and indices differ in length")

    def __getitem__(self, param_id: str) -> int:
        try:
            return self.indices[self.ids.index(param_id)]
        except ValueError:
            raise NotFound(f"unknown parameter {param_id!r}") from None

    def items(self):
        return zip(self.ids, self.indices)

    def __str__(self):
        return serialize_cpv(self)


@dataclass(frozen=True)
class ParameterSpace:
    params: tuple[ParameterSpec, ...]

    def __post_init__(self):
        params = tuple(self.params)
        ids = [p.id for p in params]
        if len(set(ids)) != len(ids):
            raise InvalidArgument(f"duplicate parameter ids in {ids}")
        object.__setattr__(self, "params", params)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.params)

    def spec(self, param_id: str) -> ParameterSpec:
        for p in self.params:
            if p.id == param_id:
                return p
        raise NotFound(f"unknown parameter {param_id!r}")

    def value(self, cpv: CPV, param_id: str) -> str:
        return self.spec(param_id).options[cpv[param_id]]

    def values(self, cpv: CPV) -> dict[str, str]:
        return {p.id: p.options[i] for p, i in zip(self.params, cpv.indices)}

    def check(self, cpv: CPV) -> CPV:
        if cpv.ids != self.ids:
            raise InvalidArgument(f"CPV ids {cpv.ids} do not match space {self.ids}")
        for p, i in zip(self.params, cpv.indices):
            if not 0 <= i < len(p.options):
                raise InvalidArgument(f"{p.id}: option index {i} out of range")
        return cpv

    def __len__(self):
        return len(self.params)

    def to_list(self) -> list[dict]:
        return [{"id": p.id, "name": p.name, "options": list(p.options)} for p in self.params]

    @classmethod
    def from_list(cls, items: list[dict]) -> "ParameterSpace":
        if not isinstance(items, list):
            raise InvalidArgument("parameter space must be a JSON array")
        try:
            return cls(tuple(ParameterSpec(d["id"], d.get("name", d["id"]), tuple(d["options"]))
                             for d in items))
        except (KeyError, TypeError) as e:
            raise InvalidArgument(f"bad parameter entry: {e}") from None


def default_cpv(space: ParameterSpace) -> CPV:
    return CPV(space.ids, (0,) * len(space))


def space_size(space: ParameterSpace) -> int:
    return math.prod(len(p.options) for p in space.params)


def enumerate_cpvs(space: ParameterSpace) -> Iterator[CPV]:
    """All CPVs, first parameter varying slowest."""
    ids = space.ids
    for combo in product(*(range(len(p.options)) for p in space.params)):
        yield CPV(ids, combo)


def with_option(space: ParameterSpace, cpv: CPV, param_id: str, option_index: int) -> CPV:
    space.check(cpv)
    spec = space.spec(param_id)
    if not 0 <= option_index < len(spec.options):
        raise InvalidArgument(
            f"{param_id}: option index {option_index} out of range 0..{len(spec.options) - 1}"
        )
    pos = space.ids.index(param_id)
    indices = cpv.indices[:pos] + (option_index,) + cpv.indices[pos + 1:]
    return CPV(cpv.ids, indices)


def serialize_cpv(cpv: CPV) -> str:
    return ",".join(f"{pid}={option_label(i)}" for pid, i in cpv.items())


def parse_cpv(space: ParameterSpace, text: str) -> CPV:
    """Parse ``id=LABEL`` pairs; every parameter of ``space`` must appear once."""
    text = text.strip()
    seen: dict[str, int] = {}
    if text:
        for part in text.split(","):
            pid, sep, label = part.strip().partition("=")
            if not sep:
                raise ParseError(f"expected id=LABEL, got {part!r}")
            if pid not in space.ids:
                raise ParseError(f"unknown parameter {pid!r}")
            if pid in seen:
                raise ParseError(f"parameter {pid!r} given twice")
            idx = label_index(label.strip())
            if idx >= len(space.spec(pid).options):
                raise ParseError(f"{pid} has no option {label!r}")
            seen[pid] = idx
    missing = [pid for pid in space.ids if pid not in seen]
    if missing:
        raise ParseError(f"missing parameters {missing}")
    return CPV(space.ids, tuple(seen[pid] for pid in space.ids))


def load_space(path: str | Path) -> ParameterSpace:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: {e.msg}", e.lineno) from None
    return ParameterSpace.from_list(data)


def builtin_space(name: str = "spark9") -> ParameterSpace:
    """Shipped spaces: ``spark9`` (default), ``binary9``, ``binary5``, ``multi9``, ``multi5``."""
    res = resources.files("scaler") / "data" / f"space_{name}.json"
    if not res.is_file():
        raise NotFound(f"no built-in parameter space {name!r}")
    return ParameterSpace.from_list(json.loads(res.read_text()))
