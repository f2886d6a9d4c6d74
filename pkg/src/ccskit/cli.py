"""Command-line front end.

Subcommands: eq, mc, lts, traces, fmt.  Exit codes: 0 success / holds /
equivalent, 1 property fails / inequivalent, 2 usage or parse or semantic
error, 3 state-limit or unguarded-recursion error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Tuple

from . import equivalence, logic, parser, semantics
from .parser import SourceError
from .semantics import ExploreLimits, TruncatedLtsError, UnguardedRecursionError
from .syntax import Label


@dataclass
class RunReport:
    command: str
    verdict: str  # holds | fails | equivalent | inequivalent | ok
    witness: Optional[str] = None
    states_a: Optional[int] = None
    states_b: Optional[int] = None
    elapsed_ms: int = 0

    def to_json(self) -> str:
        fields = {"command": self.command, "verdict": self.verdict}
        if self.witness is not None:
            fields["witness"] = self.witness
        if self.states_a is not None:
            fields["states_a"] = self.states_a
        if self.states_b is not None:
            fields["states_b"] = self.states_b
        fields["elapsed_ms"] = self.elapsed_ms
        return json.dumps(fields)


def render_trace(labels: Tuple[Label, ...]) -> str:
    return ".".join(str(l) for l in labels)


def _build_argparser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit a single JSON report object")
    common.add_argument("--max-states", type=int, default=100000, metavar="N",
                        help="state-space exploration cap (default 100000)")

    ap = argparse.ArgumentParser(
        prog="ccskit",
        description="Value-passing CCS workbench: trace equivalence and "
                    "mu-calculus model checking over finite state spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eq", parents=[common],
                       help="decide weak trace equivalence of two processes")
    p.add_argument("model")
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("mc", parents=[common],
                       help="check a mu-calculus formula against a process")
    p.add_argument("model")
    p.add_argument("process")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula")
    g.add_argument("--formula-file")

    p = sub.add_parser("lts", parents=[common],
                       help="expand a process and export its LTS")
    p.add_argument("model")
    p.add_argument("process")
    p.add_argument("--dot", metavar="PATH",
                   help="write a GraphViz digraph to PATH ('-' for stdout)")

    p = sub.add_parser("traces", parents=[common],
                       help="enumerate observable traces up to a depth")
    p.add_argument("model")
    p.add_argument("process")
    p.add_argument("--depth", type=int, required=True)

    p = sub.add_parser("fmt", parents=[common],
                       help="reprint a model in canonical syntax")
    p.add_argument("model")
    return ap


def _load_model(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _CliError(2, f"cannot read {path}: {exc.strerror}")
    try:
        return parser.parse_model(text)
    except SourceError as exc:
        raise _CliError(2, f"{path}:{exc}")


def _build(model, name: str, limits: ExploreLimits):
    try:
        return semantics.build_lts(model, name, limits)
    except KeyError:
        raise _CliError(2, f"no process named {name}")
    except ValueError as exc:
        raise _CliError(2, str(exc))
    except UnguardedRecursionError as exc:
        raise _CliError(3, str(exc))


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


def run(argv) -> int:
    """Entry point; returns the process exit code."""
    ap = _build_argparser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    start = time.monotonic()
    try:
        report, output = _dispatch(args)
    except _CliError as exc:
        print(exc.message, file=sys.stderr)
        return exc.code
    except TruncatedLtsError as exc:
        print(str(exc), file=sys.stderr)
        return 3
    report.elapsed_ms = int((time.monotonic() - start) * 1000)
    if args.json:
        print(report.to_json())
    else:
        for line in output:
            print(line)
    return 0 if report.verdict in ("holds", "equivalent", "ok") else 1


def _dispatch(args) -> Tuple[RunReport, list]:
    limits = ExploreLimits(max_states=args.max_states)
    model = _load_model(args.model)
    if args.command == "eq":
        a = _build(model, args.left, limits)
        b = _build(model, args.right, limits)
        verdict = equivalence.trace_equivalent(a, b)
        if verdict.equivalent:
            report = RunReport("eq", "equivalent",
                               states_a=len(a.states), states_b=len(b.states))
            out = [f"{args.left} and {args.right} are trace equivalent"]
        else:
            witness = render_trace(verdict.witness)
            side = args.left if verdict.witness_side == "first" else args.right
            report = RunReport("eq", "inequivalent", witness=witness,
                               states_a=len(a.states), states_b=len(b.states))
            out = [f"{args.left} and {args.right} are not trace equivalent",
                   f"distinguishing trace: {witness} (a trace of {side} only)"]
        return report, out
    if args.command == "mc":
        if args.formula is not None:
            text = args.formula
        else:
            try:
                with open(args.formula_file, encoding="utf-8") as fh:
                    text = fh.read().strip()
            except OSError as exc:
                raise _CliError(2, f"cannot read {args.formula_file}: {exc.strerror}")
        try:
            formula = parser.parse_formula(text)
        except SourceError as exc:
            raise _CliError(2, f"formula: {exc}")
        lts = _build(model, args.process, limits)
        holds = logic.check(lts, formula)
        report = RunReport("mc", "holds" if holds else "fails",
                           states_a=len(lts.states))
        out = [f"{args.process} {'satisfies' if holds else 'does not satisfy'} "
               f"the formula"]
        return report, out
    if args.command == "lts":
        lts = _build(model, args.process, limits)
        dot = semantics.to_dot(lts)
        out = [f"{args.process}: {len(lts.states)} states, "
               f"{len(lts.transitions)} transitions"
               + (" (truncated)" if lts.truncated else "")]
        if args.dot == "-":
            out = [dot.rstrip("\n")]
        elif args.dot:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(dot)
        report = RunReport("lts", "ok", states_a=len(lts.states))
        if lts.truncated:
            raise _CliError(3, "state space truncated at the state limit")
        return report, out
    if args.command == "traces":
        if args.depth < 0:
            raise _CliError(2, "--depth must be nonnegative")
        lts = _build(model, args.process, limits)
        traces = equivalence.bounded_traces(lts, args.depth)
        rendered = sorted(render_trace(t) for t in traces)
        report = RunReport("traces", "ok", states_a=len(lts.states))
        return report, [r if r else "<empty>" for r in rendered]
    if args.command == "fmt":
        report = RunReport("fmt", "ok")
        return report, [parser.print_model(model).rstrip("\n")]
    raise _CliError(2, f"unknown command {args.command}")


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
