"""Bundled models and a frozen expected-results manifest.

The manifest is line-oriented: tab-separated fields
``model  command  args  verdict  [witness]  [state counts]``.
State counts were produced by this implementation's exhaustive exploration
and frozen; verify_manifest rebuilds everything and compares exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import List, Optional

from .. import equivalence, logic, parser, semantics
from ..cli import render_trace


def read_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def load_model(name: str = "bb84.ccs"):
    return parser.parse_model(read_text(name))


@dataclass
class ManifestEntry:
    model: str
    command: str
    args: List[str]
    verdict: str
    witness: Optional[str]
    state_counts: Optional[List[int]]

    @property
    def entry_id(self) -> str:
        return f"{self.model} {self.command} {' '.join(self.args)}"


@dataclass
class EntryResult:
    entry: ManifestEntry
    ok: bool
    detail: str = ""


def read_manifest(name: str = "manifest") -> List[ManifestEntry]:
    entries = []
    for raw in read_text(name).splitlines():
        line = raw.strip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 4:
            raise ValueError(f"malformed manifest line: {raw!r}")
        fields += [""] * (6 - len(fields))
        model, command, args, verdict, witness, counts = fields[:6]
        entries.append(ManifestEntry(
            model=model,
            command=command,
            args=args.split(),
            verdict=verdict,
            witness=witness or None,
            state_counts=[int(c) for c in counts.split(",")] if counts else None,
        ))
    return entries


def verify_manifest(name: str = "manifest") -> List[EntryResult]:
    """Replay every manifest entry through the library and compare exactly."""
    results = []
    models = {}
    for entry in read_manifest(name):
        if entry.model not in models:
            models[entry.model] = load_model(entry.model)
        model = models[entry.model]
        try:
            results.append(_run_entry(entry, model))
        except Exception as exc:  # a crash is a failed entry, not a crash here
            results.append(EntryResult(entry, False, f"error: {exc}"))
    return results


def _run_entry(entry: ManifestEntry, model) -> EntryResult:
    problems = []
    if entry.command == "eq":
        left, right = entry.args
        a = semantics.build_lts(model, left)
        b = semantics.build_lts(model, right)
        verdict = equivalence.trace_equivalent(a, b)
        got = "equivalent" if verdict.equivalent else "inequivalent"
        got_witness = render_trace(verdict.witness) if verdict.witness else None
        counts = [len(a.states), len(b.states)]
    elif entry.command == "mc":
        process, formula_text = entry.args[0], " ".join(entry.args[1:])
        lts = semantics.build_lts(model, process)
        formula = parser.parse_formula(formula_text)
        got = "holds" if logic.check(lts, formula) else "fails"
        got_witness = None
        counts = [len(lts.states)]
    else:
        return EntryResult(entry, False, f"unknown command {entry.command}")
    if got != entry.verdict:
        problems.append(f"verdict {got} != expected {entry.verdict}")
    if entry.witness != got_witness:
        problems.append(f"witness {got_witness} != expected {entry.witness}")
    if entry.state_counts is not None and counts != entry.state_counts:
        problems.append(f"state counts {counts} != expected {entry.state_counts}")
    return EntryResult(entry, not problems, "; ".join(problems))
