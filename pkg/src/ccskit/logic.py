"""Modal mu-calculus evaluation over a finite LTS by Kleene fixpoint
iteration.  Weak modalities abstract tau steps on both sides of the
observable step; boxes are computed setwise as duals of diamonds.
"""

from __future__ import annotations

from collections import deque
from typing import Dict, FrozenSet, List, Optional, Tuple

from .semantics import Lts
from .syntax import (
    And, Box, Diamond, Ff, FixVar, Formula, Label, Mu, Nu, Or, Tt,
    free_fix_vars, matches,
)

StateSet = FrozenSet[int]


def sat_states(lts: Lts, f: Formula) -> StateSet:
    """The set of states satisfying a closed formula."""
    lts.require_complete()
    if free_fix_vars(f):
        raise ValueError(f"formula has unbound variables {sorted(free_fix_vars(f))}")
    return _Evaluator(lts).eval(f, {})


def check(lts: Lts, f: Formula) -> bool:
    """True iff the initial state satisfies the formula."""
    return lts.initial in sat_states(lts, f)


class _Evaluator:
    def __init__(self, lts: Lts):
        self.lts = lts
        self.full: StateSet = frozenset(range(len(lts.states)))
        self._tau_pred: Optional[List[List[int]]] = None

    def eval(self, f: Formula, env: Dict[str, StateSet]) -> StateSet:
        if isinstance(f, Tt):
            return self.full
        if isinstance(f, Ff):
            return frozenset()
        if isinstance(f, And):
            return self.eval(f.left, env) & self.eval(f.right, env)
        if isinstance(f, Or):
            return self.eval(f.left, env) | self.eval(f.right, env)
        if isinstance(f, FixVar):
            return env[f.name]
        if isinstance(f, Diamond):
            body = self.eval(f.body, env)
            return self.diamond(f.pattern, body, f.weak)
        if isinstance(f, Box):
            body = self.eval(f.body, env)
            return self.full - self.diamond(f.pattern, self.full - body, f.weak)
        if isinstance(f, (Mu, Nu)):
            current = frozenset() if isinstance(f, Mu) else self.full
            while True:
                nxt = self.eval(f.body, {**env, f.name: current})
                if nxt == current:
                    return current
                current = nxt
        raise TypeError(f"not a formula: {f!r}")

    def diamond(self, pattern, target: StateSet, weak: bool) -> StateSet:
        if weak:
            target = self.tau_reach_backward(target)
        pre = frozenset(
            s for s in range(len(self.lts.states))
            if any(matches(pattern, l) and t in target
                   for l, t in self.lts.successors(s)))
        if weak:
            pre = self.tau_reach_backward(pre)
        return pre

    def tau_reach_backward(self, target: StateSet) -> StateSet:
        """States that can reach the target set by zero or more tau steps."""
        if self._tau_pred is None:
            pred: List[List[int]] = [[] for _ in self.lts.states]
            for src, label, dst in self.lts.transitions:
                if label.is_tau:
                    pred[dst].append(src)
            self._tau_pred = pred
        out = set(target)
        stack = list(target)
        while stack:
            s = stack.pop()
            for p in self._tau_pred[s]:
                if p not in out:
                    out.add(p)
                    stack.append(p)
        return frozenset(out)


def diamond_witness(lts: Lts, f: Formula) -> Optional[Tuple[Label, ...]]:
    """A concrete label sequence realizing a formula from the existential
    fragment (tt, &&, ||, diamonds), or None when the formula fails.

    Strong steps contribute their label (tau included); weak steps
    contribute only the observable label.
    """
    _check_existential(f)
    ev = _Evaluator(lts)
    sat: Dict[Formula, StateSet] = {}

    def satset(g: Formula) -> StateSet:
        if g not in sat:
            sat[g] = ev.eval(g, {})
        return sat[g]

    def witness(s: int, g: Formula) -> Tuple[Label, ...]:
        if isinstance(g, Tt):
            return ()
        if isinstance(g, And):
            wl = witness(s, g.left)
            wr = witness(s, g.right)
            return wl if len(wl) >= len(wr) else wr
        if isinstance(g, Or):
            if s in satset(g.left):
                return witness(s, g.left)
            return witness(s, g.right)
        if isinstance(g, Diamond):
            body = satset(g.body)
            if not g.weak:
                label, t = min(
                    ((l, t) for l, t in lts.successors(s)
                     if matches(g.pattern, l) and t in body),
                    key=lambda lt: (lt[0].sort_key(), lt[1]))
                return (label,) + witness(t, g.body)
            label, t = _best_weak_step(lts, ev, s, g.pattern, body)
            return (label,) + witness(t, g.body)
        raise AssertionError(g)

    if lts.initial not in satset(f):
        return None
    return witness(lts.initial, f)


def _best_weak_step(lts: Lts, ev: _Evaluator, s: int, pattern,
                    body: StateSet) -> Tuple[Label, int]:
    """The least (label, landing state) pair realizing tau* label tau*."""
    before = _tau_forward(lts, s)
    candidates = []
    for s1 in sorted(before):
        for label, s2 in lts.successors(s1):
            if not matches(pattern, label):
                continue
            for t in sorted(_tau_forward(lts, s2)):
                if t in body:
                    candidates.append((label.sort_key(), t, label))
                    break
    key, t, label = min(candidates)
    return label, t


def _tau_forward(lts: Lts, s: int) -> FrozenSet[int]:
    out = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        for label, v in lts.successors(u):
            if label.is_tau and v not in out:
                out.add(v)
                stack.append(v)
    return frozenset(out)


def _check_existential(f: Formula):
    if isinstance(f, Tt):
        return
    if isinstance(f, (And, Or)):
        _check_existential(f.left)
        _check_existential(f.right)
        return
    if isinstance(f, Diamond):
        _check_existential(f.body)
        return
    raise ValueError(
        "diamond_witness handles only tt, &&, || and diamond formulas")
