"""Weak trace equivalence via subset construction over observable labels.

Because every state of a CCS term is accepting, trace languages are
prefix-closed; two systems are trace equivalent iff every reachable pair of
determinized macro-states enables the same visible labels.  A breadth-first
product search therefore yields a shortest distinguishing trace directly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .semantics import Lts
from .syntax import Label


@dataclass
class Dts:
    """Deterministic transition structure over tau-closed macro-states."""

    macro_states: List[FrozenSet[int]]
    initial: int
    transitions: Dict[Tuple[int, Label], int]

    def enabled(self, macro: int) -> List[Label]:
        labels = [l for m, l in self.transitions if m == macro]
        return sorted(labels, key=Label.sort_key)


@dataclass
class EqVerdict:
    equivalent: bool
    witness: Optional[Tuple[Label, ...]] = None
    witness_side: Optional[str] = None  # "first" | "second"


def tau_closure(lts: Lts, seed) -> FrozenSet[int]:
    """The least superset of seed closed under tau transitions."""
    closed: Set[int] = set(seed)
    stack = list(closed)
    while stack:
        s = stack.pop()
        for label, t in lts.successors(s):
            if label.is_tau and t not in closed:
                closed.add(t)
                stack.append(t)
    return frozenset(closed)


def determinize(lts: Lts) -> Dts:
    """Classical subset construction with tau closure at every step."""
    lts.require_complete()
    start = tau_closure(lts, {lts.initial})
    macro_states = [start]
    index = {start: 0}
    transitions: Dict[Tuple[int, Label], int] = {}
    queue = deque([0])
    while queue:
        m = queue.popleft()
        moves: Dict[Label, Set[int]] = {}
        for s in macro_states[m]:
            for label, t in lts.successors(s):
                if not label.is_tau:
                    moves.setdefault(label, set()).add(t)
        for label in sorted(moves, key=Label.sort_key):
            target = tau_closure(lts, moves[label])
            j = index.get(target)
            if j is None:
                j = len(macro_states)
                index[target] = j
                macro_states.append(target)
                queue.append(j)
            transitions[(m, label)] = j
    return Dts(macro_states=macro_states, initial=0, transitions=transitions)


def trace_equivalent(a: Lts, b: Lts) -> EqVerdict:
    """Decide weak trace equivalence; on failure report a shortest witness.

    Ties are broken by the label order (inputs before outputs, then action
    name, then arguments), so the reported witness is deterministic.
    """
    da, db = determinize(a), determinize(b)
    edges_a = _edges_by_state(da)
    edges_b = _edges_by_state(db)
    seen = {(da.initial, db.initial)}
    queue = deque([(da.initial, db.initial, ())])
    while queue:
        ma, mb, path = queue.popleft()
        ea, eb = edges_a[ma], edges_b[mb]
        if set(ea) != set(eb):
            diff = sorted(set(ea) ^ set(eb), key=Label.sort_key)
            label = diff[0]
            side = "first" if label in ea else "second"
            return EqVerdict(False, path + (label,), side)
        for label in sorted(ea, key=Label.sort_key):
            pair = (ea[label], eb[label])
            if pair not in seen:
                seen.add(pair)
                queue.append((*pair, path + (label,)))
    return EqVerdict(True)


def _edges_by_state(dts: Dts) -> List[Dict[Label, int]]:
    edges: List[Dict[Label, int]] = [{} for _ in dts.macro_states]
    for (m, label), j in dts.transitions.items():
        edges[m][label] = j
    return edges


def bounded_traces(lts: Lts, depth: int) -> Set[Tuple[Label, ...]]:
    """All observable traces of length <= depth, by brute-force search.

    Independent of determinize; used as the oracle for trace_equivalent.
    Output may be exponential in depth.
    """
    closures: Dict[int, FrozenSet[int]] = {}

    def closure(s: int) -> FrozenSet[int]:
        if s not in closures:
            closures[s] = tau_closure(lts, {s})
        return closures[s]

    memo: Dict[Tuple[int, int], Set[Tuple[Label, ...]]] = {}

    def traces_from(s: int, d: int) -> Set[Tuple[Label, ...]]:
        key = (s, d)
        if key in memo:
            return memo[key]
        out: Set[Tuple[Label, ...]] = {()}
        if d > 0:
            for s2 in closure(s):
                for label, t in lts.successors(s2):
                    if label.is_tau:
                        continue
                    for rest in traces_from(t, d - 1):
                        out.add((label,) + rest)
        memo[key] = out
        return out

    return traces_from(lts.initial, depth)
