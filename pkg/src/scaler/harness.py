"""Executor that runs a shell command per (CPV, node count).

The command template may reference ``{nodes}`` and any parameter id, e.g.
``./run.sh --workers {nodes} --executor-memory {P1}``.  Parameter
placeholders are replaced with the shell-quoted option value.  The response
time is either the wall-clock duration of the command or the last non-empty
line of its standard output.
"""

from __future__ import annotations

import json
import math
import os
import shlex
import string
import subprocess
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import HarnessTimeout, InvalidArgument, ParseError, RunFailure
from .params import CPV, ParameterSpace

TIME_SOURCES = ("wallclock", "stdout")


def template_fields(template: str) -> set[str]:
    try:
        parsed = list(string.Formatter().parse(template))
    except ValueError as e:
        raise InvalidArgument(f"bad command template: {e}") from None
    fields = set()
    for _, name, spec, conv in parsed:
        if name is None:
            continue
        if name == "" or spec or conv:
            raise InvalidArgument(f"unsupported placeholder {{{name}}} in command template")
        fields.add(name)
    return fields


@dataclass(frozen=True)
class HarnessConfig:
    command: str
    time_source: str = "stdout"
    timeout: float = 3600.0
    workdir: str | None = None
    env: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.time_source not in TIME_SOURCES:
            raise InvalidArgument(f"time_source must be one of {TIME_SOURCES}")
        if not self.timeout > 0:
            raise InvalidArgument("timeout must be positive")
        template_fields(self.command)

    def check_against(self, space: ParameterSpace) -> None:
        unknown = template_fields(self.command) - {"nodes"} - set(space.ids)
        if unknown:
            raise InvalidArgument(f"command template references unknown placeholders {sorted(unknown)}")

    @classmethod
    def from_dict(cls, d: dict) -> "HarnessConfig":
        if not isinstance(d, dict) or "command" not in d:
            raise InvalidArgument("harness config needs a 'command' field")
        extra = set(d) - {"command", "time_source", "timeout", "workdir", "env"}
        if extra:
            raise InvalidArgument(f"unknown harness fields {sorted(extra)}")
        env = d.get("env") or {}
        if not all(isinstance(k, str) and isinstance(v, str) for k, v in env.items()):
            raise InvalidArgument("env must map strings to strings")
        return cls(d["command"], d.get("time_source", "stdout"), float(d.get("timeout", 3600.0)),
                   d.get("workdir"), dict(env))


def load_harness(path: str | Path) -> HarnessConfig:
    with open(path) as fh:
        try:
            return HarnessConfig.from_dict(json.load(fh))
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: {e.msg}", e.lineno) from None


def render_command(config: HarnessConfig, space: ParameterSpace, cpv: CPV, node_count: int) -> str:
    config.check_against(space)
    values = {pid: shlex.quote(v) for pid, v in space.values(space.check(cpv)).items()}
    return config.command.format(nodes=int(node_count), **values)


def parse_seconds(stdout: str) -> float:
    lines = [ln.strip() for ln in stdout.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("command printed nothing; expected seconds on the last line")
    try:
        t = float(lines[-1])
    except ValueError:
        raise ParseError(f"last output line is not a number: {lines[-1]!r}") from None
    if not (math.isfinite(t) and t > 0):
        raise ParseError(f"reported time must be positive, got {lines[-1]!r}")
    return t


def run_once(config: HarnessConfig, space: ParameterSpace, cpv: CPV, node_count: int) -> float:
    cmd = render_command(config, space, cpv, node_count)
    env = {**os.environ, **config.env} if config.env else None
    start = time.perf_counter()
    try:
        proc = subprocess.run(cmd, shell=True, capture_output=True, text=True,
                              timeout=config.timeout, cwd=config.workdir, env=env)
    except subprocess.TimeoutExpired:
        raise HarnessTimeout(f"command timed out after {config.timeout}s: {cmd}") from None
    elapsed = time.perf_counter() - start
    if proc.returncode != 0:
        raise RunFailure(f"command exited with status {proc.returncode}: {cmd}\n{proc.stderr.strip()}")
    if config.time_source == "wallclock":
        return elapsed
    return parse_seconds(proc.stdout)


class HarnessExecutor:
    """Runs one child process at a time; not meant to be shared across threads."""

    def __init__(self, config: HarnessConfig, space: ParameterSpace):
        config.check_against(space)
        self.config = config
        self.space = space

    def execute(self, cpv: CPV, node_count: int) -> float:
        return run_once(self.config, self.space, cpv, node_count)
