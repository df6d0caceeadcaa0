"""Scalability scoring and configuration adaptation.

Exit codes: 0 success, 2 bad input, 3 execution failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import replace
from pathlib import Path

from . import analysis, files
from .engine import (
    DEFAULT_INCREMENT,
    AdaptationConfig,
    adapt,
    derive_threshold,
    measure_curve,
)
from .errors import AdaptationAborted, InvalidArgument, NotFound, RunFailure, ScalerError
from .harness import HarnessExecutor, load_harness
from .metrics import DEFAULT_SCHEDULE, WeightVector, scalability_score
from .params import builtin_space, default_cpv, load_space, parse_cpv
from .simulator import SimExecutor, builtin_model, load_model

EXIT_OK, EXIT_INPUT, EXIT_RUNTIME = 0, 2, 3
BUILTIN = "builtin:"


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise InvalidArgument(f"no such file: {path}")
    return p


def _space(arg: str | None):
    if arg is None:
        return builtin_space("spark9")
    if arg.startswith(BUILTIN):
        return builtin_space(arg[len(BUILTIN):])
    return load_space(_existing(arg))


def _model(arg: str, seed: int | None):
    model = builtin_model(arg[len(BUILTIN):]) if arg.startswith(BUILTIN) else load_model(_existing(arg))
    return model if seed is None else replace(model, seed=seed)


def _weights(args, n_points: int) -> WeightVector:
    if args.weights is None:
        return WeightVector.equal(n_points)
    return files.parse_weights(args.weights)


def _write(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_score(args) -> int:
    curve = files.load_curve(_existing(args.input))
    breakdown = scalability_score(curve, _weights(args, len(curve)))
    _write(args, analysis.emit_report(curve if args.format == "tsv-plot" else breakdown, args.format))
    return EXIT_OK


def _adapt_config(args) -> AdaptationConfig:
    config = AdaptationConfig()
    if args.config:
        config = AdaptationConfig.from_dict(json.loads(_existing(args.config).read_text()))
    over = {}
    if args.threshold is not None:
        over["threshold"] = args.threshold
    if args.increment is not None:
        over["increment"] = args.increment
    if args.repeats is not None:
        over["repeats"] = args.repeats
    if args.schedule is not None:
        over["schedule"] = files.parse_schedule(args.schedule)
        if args.weights is None:
            over["weights"] = WeightVector.equal(len(over["schedule"]))
    if args.weights is not None:
        over["weights"] = files.parse_weights(args.weights)
    return replace(config, **over) if over else config


def cmd_adapt(args) -> int:
    if not args.executor:
        raise InvalidArgument("--executor is required (sim:<model file> or cmd:<harness file>)")
    if not args.output:
        raise InvalidArgument("--output is required for adapt")
    space = _space(args.space)
    config = _adapt_config(args)
    kind, _, target = args.executor.partition(":")
    if kind == "sim":
        executor = SimExecutor(_model(target, args.seed))
    elif kind == "cmd":
        executor = HarnessExecutor(load_harness(_existing(target)), space)
    else:
        raise InvalidArgument(f"executor must be sim:<file> or cmd:<file>, got {args.executor!r}")

    out = Path(args.output)
    trace_path = out.with_name(out.stem + ".trace.jsonl")
    with open(trace_path, "w") as trace:
        def on_trial(rec):
            trace.write(json.dumps({"type": "trial", **rec.to_dict()}) + "\n")
            trace.flush()

        try:
            result = adapt(executor, space, config, on_trial=on_trial)
        except AdaptationAborted as e:
            trace.write(json.dumps({"type": "error", "message": str(e),
                                    "default_score": e.default_score}) + "\n")
            raise
        payload = {"config": config.to_dict(), **result.to_dict()}
        trace.write(json.dumps({"type": "result", **{k: v for k, v in payload.items() if k != "trials"}}) + "\n")
    out.write_text(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    if not args.model:
        raise InvalidArgument("--model is required for simulate")
    space = _space(args.space)
    model = _model(args.model, args.seed)
    cpv = parse_cpv(space, args.cpv) if args.cpv else default_cpv(space)
    schedule = files.parse_schedule(args.schedule) if args.schedule else DEFAULT_SCHEDULE
    repeats = 1 if args.repeats is None else args.repeats
    curve = measure_curve(SimExecutor(model), cpv, schedule, repeats)
    lines = ["nodes,time_sec"] + [f"{n},{t!r}" for n, t in zip(curve.nodes, curve.times)]
    _write(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_rank(args) -> int:
    cases = files.load_cases(_existing(args.input))
    group = None
    if args.group:
        try:
            pattern = re.compile(args.group)
        except re.error as e:
            raise InvalidArgument(f"bad --group pattern: {e}") from None
        group = lambda c: bool(pattern.search(c.case_id))  # noqa: E731
    ranking = analysis.rank_parameters(cases, group)
    for pid in ranking.excluded:
        print(f"warning: parameter {pid} has no matching cases", file=sys.stderr)
    _write(args, analysis.emit_report(ranking, args.format))
    return EXIT_OK


def cmd_variations(args) -> int:
    curves = files.load_curves(_existing(args.input))
    obj = curves if args.format == "tsv-plot" else analysis.variation_report(curves)
    _write(args, analysis.emit_report(obj, args.format))
    return EXIT_OK


def cmd_threshold(args) -> int:
    scores = files.load_scores(_existing(args.input))
    increment = DEFAULT_INCREMENT if args.increment is None else args.increment
    value = derive_threshold([s for _, s in scores], increment)
    if args.format == "json":
        text = json.dumps({"threshold": value, "increment": increment,
                           "summary": analysis.summarize(scores).to_dict()}, indent=2) + "\n"
    else:
        text = f"{value:.12g}\n"
    _write(args, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--input", help="input file")
    shared.add_argument("--output", help="output file (default: stdout)")
    shared.add_argument("--weights", help="weights JSON file or comma list, trend weight last")
    shared.add_argument("--schedule", help="node counts, e.g. 1,2,4,6,8")
    shared.add_argument("--seed", type=int, help="override the simulator seed")
    shared.add_argument("--repeats", type=int, help="runs averaged per point")
    shared.add_argument("--threshold", type=float, help="adaptation threshold score")
    shared.add_argument("--increment", type=float, help="threshold increment over the mean score")

    parser = argparse.ArgumentParser(prog="scaler", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", parents=[shared], help="score one response-time curve")
    p.add_argument("--format", choices=analysis.REPORT_FORMATS, default="json")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("adapt", parents=[shared], help="run the adaptation loop")
    p.add_argument("--space", help="parameter space JSON (default: builtin:spark9)")
    p.add_argument("--config", help="adaptation config JSON")
    p.add_argument("--executor", help="sim:<model file> or cmd:<harness file>")
    p.set_defaults(func=cmd_adapt)

    p = sub.add_parser("simulate", parents=[shared], help="print a simulated curve as CSV")
    p.add_argument("--model", help="simulator model JSON or builtin:<name>")
    p.add_argument("--cpv", help="CPV string, e.g. P1=B,P2=A,... (default: all defaults)")
    p.add_argument("--space", help="parameter space JSON (default: builtin:spark9)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rank", parents=[shared], help="rank parameters by score impact")
    p.add_argument("--group", help="regex selecting case ids")
    p.add_argument("--format", choices=analysis.REPORT_FORMATS[:2], default="json")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("variations", parents=[shared], help="count unexpected time increases")
    p.add_argument("--format", choices=analysis.REPORT_FORMATS, default="json")
    p.set_defaults(func=cmd_variations)

    p = sub.add_parser("threshold", parents=[shared], help="mean score plus increment")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_threshold)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "input", None) is None and args.command in ("score", "rank", "variations", "threshold"):
        print(f"scaler {args.command}: --input is required", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except RunFailure as e:
        print(f"scaler {args.command}: run failed: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except (InvalidArgument, NotFound, ScalerError, json.JSONDecodeError, OSError) as e:
        print(f"scaler {args.command}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
