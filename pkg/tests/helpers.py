"""Random generators shared by the property and acceptance tests.

All generators take an explicit random.Random so every test run is
reproducible from its seed.
"""

from __future__ import annotations

import random
from typing import Dict, List, Tuple

from ccskit.syntax import (
    NIL, Act, AnyVisible, Box, Call, Choice, Cond, Definition, Diamond, Eq,
    ExactLabel, FixVar, Label, Lit, Model, Mu, Neq, Nu, Or, And, Par, Prefix,
    Proc, Restrict, TauOnly, Tt, Ff, Var,
)

ACTIONS = ("a", "b", "c")


def random_vexpr(rng: random.Random, scope: Tuple[str, ...]):
    if scope and rng.random() < 0.5:
        return Var(rng.choice(scope))
    return Lit(rng.randint(0, 1))


def random_bexp(rng: random.Random, scope: Tuple[str, ...]):
    cls = rng.choice([Eq, Neq])
    return cls(random_vexpr(rng, scope), random_vexpr(rng, scope))


def random_prefix(rng: random.Random, scope: Tuple[str, ...], fresh: List[str]):
    """A random prefix; input binders extend the returned scope."""
    action = rng.choice(ACTIONS)
    arity = rng.randint(0, 1)
    if rng.random() < 0.5:
        args = tuple(random_vexpr(rng, scope) for _ in range(arity))
        return Prefix(True, action, args), scope
    binders = tuple(fresh.pop() for _ in range(arity))
    return Prefix(False, action, binders), scope + binders


def random_branch(rng: random.Random, scope: Tuple[str, ...],
                  sigs: Dict[str, int], fresh: List[str],
                  max_prefixes: int = 3) -> Proc:
    """A guarded chain of 1..max_prefixes prefixes ending in 0 or a call."""
    n = rng.randint(1, max_prefixes)
    prefixes = []
    for _ in range(n):
        p, scope = random_prefix(rng, scope, fresh)
        prefixes.append(p)
    if sigs and rng.random() < 0.6:
        name = rng.choice(sorted(sigs))
        tail: Proc = Call(name, tuple(random_vexpr(rng, scope)
                                      for _ in range(sigs[name])))
    else:
        tail = NIL
    if rng.random() < 0.3:
        tail = Cond(random_bexp(rng, scope), tail, NIL)
    for p in reversed(prefixes):
        tail = Act(p, tail)
    return tail


def random_body(rng: random.Random, params: Tuple[str, ...],
                sigs: Dict[str, int]) -> Proc:
    fresh = [f"v{i}" for i in range(20)][::-1]
    branches = [random_branch(rng, params, sigs, fresh)
                for _ in range(rng.randint(1, 3))]
    body = branches[0]
    for b in branches[1:]:
        body = Choice(body, b)
    if rng.random() < 0.3:
        other = random_branch(rng, params, sigs, fresh)
        body = Par(body, other)
    if rng.random() < 0.25:
        body = Restrict(body, frozenset(rng.sample(ACTIONS, rng.randint(1, 2))))
    return body


def random_model(rng: random.Random, max_defs: int = 4) -> Model:
    """A random guarded model whose root definition is D0 (nullary)."""
    n = rng.randint(1, max_defs)
    sigs = {f"D{i}": (0 if i == 0 else rng.randint(0, 1)) for i in range(n)}
    defs = {}
    for name, arity in sigs.items():
        params = tuple(f"p{j}" for j in range(arity))
        defs[name] = Definition(name, params, random_body(rng, params, sigs))
    return Model(defs)


# ---------------------------------------------------------------------------
# Formula generator for parser round-trips and logic properties


def random_pattern(rng: random.Random):
    r = rng.random()
    if r < 0.2:
        return AnyVisible()
    if r < 0.3:
        return TauOnly()
    action = rng.choice(ACTIONS)
    args = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 1)))
    return ExactLabel(Label(action, args, rng.random() < 0.5))


def random_formula(rng: random.Random, depth: int = 4,
                   bound: Tuple[str, ...] = ()):
    choices = ["tt", "ff", "and", "or", "dia", "box"]
    if depth > 0:
        choices += ["mu", "nu"]
    if bound:
        choices += ["var", "var"]
    kind = rng.choice(choices if depth > 0 else
                      (["tt", "ff"] + (["var"] if bound else [])))
    if kind == "tt":
        return Tt()
    if kind == "ff":
        return Ff()
    if kind == "var":
        return FixVar(rng.choice(bound))
    if kind in ("and", "or"):
        cls = And if kind == "and" else Or
        return cls(random_formula(rng, depth - 1, bound),
                   random_formula(rng, depth - 1, bound))
    if kind in ("dia", "box"):
        cls = Diamond if kind == "dia" else Box
        return cls(random_pattern(rng), random_formula(rng, depth - 1, bound),
                   weak=rng.random() < 0.5)
    name = f"Z{len(bound)}"
    cls = Mu if kind == "mu" else Nu
    return cls(name, random_formula(rng, depth - 1, bound + (name,)))


def random_existential(rng: random.Random, depth: int = 3):
    kinds = ["tt", "and", "or", "dia", "dia"] if depth > 0 else ["tt"]
    kind = rng.choice(kinds)
    if kind == "tt":
        return Tt()
    if kind in ("and", "or"):
        cls = And if kind == "and" else Or
        return cls(random_existential(rng, depth - 1),
                   random_existential(rng, depth - 1))
    return Diamond(random_pattern(rng), random_existential(rng, depth - 1),
                   weak=rng.random() < 0.5)
