"""Command-line front end: simulate, compare, analyze, presets."""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import closedform
from .analysis import collapse_time_estimate, compare_traces, detect_revivals
from .csvio import fmt, format_table, header_line, read_trace_csv, trace_to_csv
from .model import build_polariton_basis
from .presets import PRESETS
from .scenario import ScenarioConfig, config_from_mapping, evaluate, read_config_text, with_method
from .traces import METHODS, NumberState

EXIT_OK, EXIT_TOLERANCE, EXIT_INVALID = 0, 1, 2


class UsageError(ValueError):
    pass


def _methods(values) -> list[str]:
    out = []
    for v in values or []:
        out.extend(m.strip() for m in v.split(",") if m.strip())
    for m in out:
        if m not in METHODS:
            raise UsageError(f"method must be one of {', '.join(METHODS)}, got {m!r}")
    return out


def load_config(args, n_methods: int = 1) -> tuple[ScenarioConfig, list[str]]:
    raw = {}
    if args.config:
        raw = read_config_text(Path(args.config).read_text())
    if args.preset:
        raw["preset"] = args.preset
    if args.tolerance is not None:
        raw["tolerance"] = repr(args.tolerance)
    methods = _methods(args.method)
    if methods:
        raw["method"] = methods[0]
    if not raw.get("preset") and "g" not in raw:
        raise UsageError("no scenario given; pass --config or --preset")
    config = config_from_mapping(raw, args.convention)
    if not methods:
        methods = [config.method]
    return config, methods


def _emit(text: str, output) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _envelope(config: ScenarioConfig, t):
    basis = build_polariton_basis(config.params)
    if isinstance(config.state, NumberState):
        return closedform.envelope_number(config.state.N, basis, t)
    return closedform.envelope_coherent(config.state.nbar, basis, t, config.convention)


def cmd_simulate(args) -> int:
    config, methods = load_config(args)
    if len(methods) != 1:
        raise UsageError("simulate takes exactly one method")
    trace = evaluate(config.params, config.state, config.grid, config.method, config.convention)
    env = _envelope(config, trace.times) if args.envelope else None
    _emit(trace_to_csv(trace, env, config.convention), args.output)
    return EXIT_OK


def _traces_for_compare(args):
    if args.files:
        if len(args.files) != 2:
            raise UsageError("compare takes exactly two trace files")
        return [read_trace_csv(Path(f).read_text()) for f in args.files], args.tolerance, "exact"
    config, methods = load_config(args)
    if len(methods) != 2:
        raise UsageError("compare needs exactly two methods, e.g. --method closed_general,oracle_secular")
    traces = []
    for m in methods:
        c = with_method(config, m)
        traces.append(evaluate(c.params, c.state, c.grid, c.method, c.convention))
    return traces, config.tolerance, config.convention


def cmd_compare(args) -> int:
    (a, b), tolerance, convention = _traces_for_compare(args)
    result = compare_traces(a, b)
    diff = np.abs(a.intensity - b.intensity)
    header = header_line(a, convention) + f" against={b.method}"
    table = format_table(header, ["t", "intensity_a", "intensity_b", "abs_diff"],
                         [a.times, a.intensity, b.intensity, diff])
    summary = f"max_abs={fmt(result.max_abs)} rms={fmt(result.rms)}\n"
    if args.output:
        Path(args.output).write_text(table)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(table + summary)
    if tolerance is not None and result.max_abs > tolerance:
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_analyze(args) -> int:
    if args.files:
        if len(args.files) != 1:
            raise UsageError("analyze takes one trace file")
        trace = read_trace_csv(Path(args.files[0]).read_text())
    else:
        config, _ = load_config(args)
        trace = evaluate(config.params, config.state, config.grid, config.method, config.convention)
    report = detect_revivals(trace).as_dict()
    try:
        report["collapse_time_estimate"] = collapse_time_estimate(trace.state, trace.params,
                                                                  build_polariton_basis(trace.params))
    except ValueError:
        report["collapse_time_estimate"] = None
    report["method"] = trace.method
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.output)
    return EXIT_OK


def cmd_presets(args) -> int:
    width = max(map(len, PRESETS))
    lines = [f"{name:<{width}}  {p.method:<15}  {p.description}" for name, p in PRESETS.items()]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polariton-cr", description="Exciton-polariton collapse and revival traces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, files=False):
        p.add_argument("--config", help="key=value scenario file")
        p.add_argument("--preset", help="named figure preset (overrides physics keys)")
        p.add_argument("--method", action="append", help="evaluator; repeat or comma-separate for compare")
        p.add_argument("--output", help="write to this path instead of stdout")
        p.add_argument("--tolerance", type=float, help="compare: exit 1 when max_abs exceeds this")
        p.add_argument("--convention", choices=closedform.COHERENT_CONVENTIONS, default="exact",
                       help="closed-form phase convention (default: exact)")
        if files:
            p.add_argument("files", nargs="*", help="trace CSV files instead of a scenario")

    p = sub.add_parser("simulate", help="write an intensity trace as CSV")
    common(p)
    p.add_argument("--envelope", action="store_true", help="add the slow envelope column")
    p.set_defaults(func=cmd_simulate)
    p = sub.add_parser("compare", help="difference of two methods or two trace files")
    common(p, files=True)
    p.set_defaults(func=cmd_compare)
    p = sub.add_parser("analyze", help="collapse and revival report as JSON")
    common(p, files=True)
    p.set_defaults(func=cmd_analyze)
    p = sub.add_parser("presets", help="list figure presets")
    p.add_argument("--output")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            status = args.func(args)
        for w in caught:
            print(f"warning: {' '.join(str(w.message).split())}", file=sys.stderr)
        return status
    except BrokenPipeError:
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except (ValueError, TypeError, OSError, configparser.Error) as exc:
        print(f"error: {' '.join(str(exc).split())}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
