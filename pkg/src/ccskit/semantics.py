"""Operational semantics: successor computation, state canonicalization, and
exhaustive LTS construction.

Input prefixes are instantiated eagerly (one transition per bit tuple), which
keeps the state space finite for the binary value domain.
"""

from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .syntax import (
    TAU, Act, Call, Choice, Cond, Eq, Label, Lit, Model, Nil, Par, Prefix,
    Proc, Restrict, all_bindings, eval_bool, eval_value, is_ground, substitute,
)


class UnguardedRecursionError(Exception):
    """A definition unfolded too many times without passing a prefix."""


class TruncatedLtsError(Exception):
    """Raised by consumers that require a fully explored LTS."""


@dataclass(frozen=True)
class ExploreLimits:
    max_states: int = 100000
    max_unfold_without_prefix: int = 1000

    def __post_init__(self):
        if self.max_states <= 0 or self.max_unfold_without_prefix <= 0:
            raise ValueError("exploration limits must be strictly positive")


DEFAULT_LIMITS = ExploreLimits()


@dataclass
class Lts:
    """A finite labeled transition system over canonical ground terms."""

    states: List[Proc]
    initial: int
    transitions: List[Tuple[int, Label, int]]
    states_explored: int = 0
    truncated: bool = False

    def __post_init__(self):
        self._succ = None

    def successors(self, state: int) -> List[Tuple[Label, int]]:
        if self._succ is None:
            succ = [[] for _ in self.states]
            for src, label, dst in self.transitions:
                succ[src].append((label, dst))
            self._succ = succ
        return self._succ[state]

    def require_complete(self):
        if self.truncated:
            raise TruncatedLtsError(
                "state space exploration hit the state limit; "
                "raise max_states to analyse this system")


# ---------------------------------------------------------------------------
# Canonicalization: + and | are flattened and sorted, restriction sets sorted.


def _flatten(term: Proc, cls) -> List[Proc]:
    if isinstance(term, cls):
        return _flatten(term.left, cls) + _flatten(term.right, cls)
    return [term]


def canonical_key(state: Proc) -> str:
    """A total key equating terms up to associativity/commutativity of + and |."""
    if isinstance(state, Nil):
        return "0"
    if isinstance(state, Act):
        p = state.prefix
        mark = "'" if p.output else ""
        args = ",".join(a if isinstance(a, str) else _ckey_vexpr(a)
                        for a in p.args)
        return f"{mark}{p.action}({args}).{canonical_key(state.cont)}"
    if isinstance(state, (Choice, Par)):
        op = "+" if isinstance(state, Choice) else "|"
        keys = sorted(canonical_key(t) for t in _flatten(state, type(state)))
        return f"({op} {' '.join(keys)})"
    if isinstance(state, Restrict):
        return f"(\\ {canonical_key(state.proc)} {{{','.join(sorted(state.names))}}})"
    if isinstance(state, Cond):
        t = state.test
        op = "=" if isinstance(t, Eq) else "!="
        test = f"{_ckey_vexpr(t.left)}{op}{_ckey_vexpr(t.right)}"
        return (f"(if {test} {canonical_key(state.then_branch)} "
                f"{canonical_key(state.else_branch)})")
    if isinstance(state, Call):
        args = ",".join(_ckey_vexpr(a) for a in state.args)
        return f"{state.name}({args})"
    raise TypeError(f"not a process term: {state!r}")


def _ckey_vexpr(e) -> str:
    return str(e.value) if isinstance(e, Lit) else e.name


# ---------------------------------------------------------------------------
# SOS successor relation


def ground_transitions(state: Proc, defs: Model,
                       limits: ExploreLimits = DEFAULT_LIMITS
                       ) -> List[Tuple[Label, Proc]]:
    """All one-step successors of a ground term, deterministically ordered."""
    if not is_ground(state):
        raise ValueError(f"state is not ground: {state!r}")
    # unguarded-recursion chains nest one interpreter frame per unfold; give
    # the guard room to fire before CPython's recursion limit does
    needed = 8 * limits.max_unfold_without_prefix + 2000
    old_limit = sys.getrecursionlimit()
    if old_limit < needed:
        sys.setrecursionlimit(needed)
    try:
        found = _succ(state, defs, 0, limits.max_unfold_without_prefix)
    finally:
        if old_limit < needed:
            sys.setrecursionlimit(old_limit)
    unique = {}
    for label, target in found:
        unique[(label, canonical_key(target))] = (label, target)
    return [unique[k] for k in sorted(unique, key=lambda k: (k[0].sort_key(), k[1]))]


def _succ(term: Proc, defs: Model, unfolds: int, max_unfolds: int):
    if isinstance(term, Nil):
        return []
    if isinstance(term, Act):
        p = term.prefix
        if p.output:
            vals = tuple(eval_value(a) for a in p.args)
            return [(Label(p.action, vals, True), term.cont)]
        out = []
        for binding in all_bindings(p.args):
            label = Label(p.action, tuple(binding[x] for x in p.args), False)
            out.append((label, substitute(term.cont, binding)))
        return out
    if isinstance(term, Choice):
        return (_succ(term.left, defs, unfolds, max_unfolds)
                + _succ(term.right, defs, unfolds, max_unfolds))
    if isinstance(term, Par):
        ls = _succ(term.left, defs, unfolds, max_unfolds)
        rs = _succ(term.right, defs, unfolds, max_unfolds)
        out = [(label, Par(p2, term.right)) for label, p2 in ls]
        out += [(label, Par(term.left, q2)) for label, q2 in rs]
        for la, p2 in ls:
            if la.is_tau:
                continue
            for lb, q2 in rs:
                if (not lb.is_tau and la.action == lb.action
                        and la.args == lb.args and la.output != lb.output):
                    out.append((TAU, Par(p2, q2)))
        return out
    if isinstance(term, Restrict):
        inner = _succ(term.proc, defs, unfolds, max_unfolds)
        return [(label, Restrict(p2, term.names)) for label, p2 in inner
                if label.is_tau or label.action not in term.names]
    if isinstance(term, Cond):
        branch = term.then_branch if eval_bool(term.test) else term.else_branch
        return _succ(branch, defs, unfolds, max_unfolds)
    if isinstance(term, Call):
        if unfolds >= max_unfolds:
            raise UnguardedRecursionError(
                f"definition {term.name} unfolds without reaching an action "
                f"prefix (recursion is not guarded)")
        d = defs.definitions[term.name]
        binding = dict(zip(d.params, (eval_value(a) for a in term.args)))
        return _succ(substitute(d.body, binding), defs, unfolds + 1, max_unfolds)
    raise TypeError(f"not a process term: {term!r}")


# ---------------------------------------------------------------------------
# Exhaustive exploration


def build_lts(defs: Model, root: str,
              limits: ExploreLimits = DEFAULT_LIMITS) -> Lts:
    """Breadth-first closure of the successor relation from Call(root).

    Deduplicates states by canonical key.  If max_states is reached, the
    partial LTS is returned with truncated=True.
    """
    d = defs.definitions.get(root)
    if d is None:
        raise KeyError(f"no definition named {root}")
    if d.params:
        raise ValueError(f"root process {root} must take no parameters")

    start = Call(root, ())
    states: List[Proc] = [start]
    index: Dict[str, int] = {canonical_key(start): 0}
    transitions: List[Tuple[int, Label, int]] = []
    truncated = False
    queue = deque([0])
    while queue:
        src = queue.popleft()
        for label, target in ground_transitions(states[src], defs, limits):
            key = canonical_key(target)
            dst = index.get(key)
            if dst is None:
                if len(states) >= limits.max_states:
                    truncated = True
                    continue
                dst = len(states)
                index[key] = dst
                states.append(target)
                queue.append(dst)
            transitions.append((src, label, dst))
    return Lts(states=states, initial=0, transitions=transitions,
               states_explored=len(states), truncated=truncated)


def to_dot(lts: Lts) -> str:
    """Render the LTS as a deterministic GraphViz digraph."""
    lines = ["digraph lts {", "  rankdir=LR;", "  node [shape=circle];",
             f"  s{lts.initial} [shape=doublecircle];"]
    for i in range(len(lts.states)):
        if i != lts.initial:
            lines.append(f"  s{i};")
    for src, label, dst in lts.transitions:
        lines.append(f'  s{src} -> s{dst} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
