"""Abstract syntax for a value-passing CCS dialect and a modal mu-calculus.

Values are binary (0 or 1).  All nodes are immutable, hashable dataclasses,
so ground closed process terms can serve directly as state-space keys.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

VALUES = (0, 1)


# ---------------------------------------------------------------------------
# Value and boolean expressions


@dataclass(frozen=True)
class Lit:
    """A literal bit value, 0 or 1."""

    value: int

    def __post_init__(self):
        if self.value not in VALUES:
            raise ValueError(f"value must be 0 or 1, got {self.value!r}")


@dataclass(frozen=True)
class Var:
    """A value variable."""

    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be nonempty")


ValueExpr = Union[Lit, Var]


@dataclass(frozen=True)
class Eq:
    left: ValueExpr
    right: ValueExpr


@dataclass(frozen=True)
class Neq:
    left: ValueExpr
    right: ValueExpr


BoolExpr = Union[Eq, Neq]


# ---------------------------------------------------------------------------
# Process terms


@dataclass(frozen=True)
class Prefix:
    """An action prefix.

    An input prefix binds its arguments (``args`` are binder names); an
    output prefix (co-action) carries value expressions.
    """

    output: bool
    action: str
    args: tuple = ()

    def __post_init__(self):
        if self.action == "tau":
            raise ValueError("'tau' is reserved for the internal action")
        if not self.output and len(set(self.args)) != len(self.args):
            raise ValueError(f"duplicate binder in input prefix {self.action}")


@dataclass(frozen=True)
class Nil:
    """The inert process (written 0)."""


@dataclass(frozen=True)
class Act:
    """Prefixing: perform an action, then continue."""

    prefix: Prefix
    cont: "Proc"


@dataclass(frozen=True)
class Choice:
    """Nondeterministic choice between two processes."""

    left: "Proc"
    right: "Proc"


@dataclass(frozen=True)
class Par:
    """Parallel composition; complementary actions may synchronise."""

    left: "Proc"
    right: "Proc"


@dataclass(frozen=True)
class Restrict:
    """Hide a set of action names (both polarities) from the outside."""

    proc: "Proc"
    names: frozenset

    def __post_init__(self):
        object.__setattr__(self, "names", frozenset(self.names))
        if not self.names:
            raise ValueError("restriction set must be nonempty")


@dataclass(frozen=True)
class Cond:
    """if test then then_branch else else_branch."""

    test: BoolExpr
    then_branch: "Proc"
    else_branch: "Proc"


@dataclass(frozen=True)
class Call:
    """Invocation of a named process definition."""

    name: str
    args: tuple = ()


Proc = Union[Nil, Act, Choice, Par, Restrict, Cond, Call]

NIL = Nil()


@dataclass(frozen=True)
class Definition:
    """A named, parameterised process equation."""

    name: str
    params: tuple
    body: Proc

    def __post_init__(self):
        if len(set(self.params)) != len(self.params):
            raise ValueError(f"duplicate parameter in definition {self.name}")


@dataclass(frozen=True)
class Model:
    """A collection of process definitions, keyed by name."""

    definitions: Mapping[str, Definition]

    def __post_init__(self):
        object.__setattr__(self, "definitions", dict(self.definitions))

    def __hash__(self):
        return hash(tuple(sorted(self.definitions)))

    def validate(self):
        """Check every Call targets a known definition with matching arity."""
        for d in self.definitions.values():
            for call in _calls(d.body):
                target = self.definitions.get(call.name)
                if target is None:
                    raise ValueError(
                        f"definition {d.name} calls unknown process {call.name}")
                if len(target.params) != len(call.args):
                    raise ValueError(
                        f"definition {d.name} calls {call.name} with "
                        f"{len(call.args)} arguments, expected {len(target.params)}")
            extra = free_value_vars(d.body) - set(d.params)
            if extra:
                raise ValueError(
                    f"definition {d.name} has unbound variables {sorted(extra)}")


def _calls(term: Proc) -> Iterator[Call]:
    if isinstance(term, Call):
        yield term
    elif isinstance(term, Act):
        yield from _calls(term.cont)
    elif isinstance(term, (Choice, Par)):
        yield from _calls(term.left)
        yield from _calls(term.right)
    elif isinstance(term, Restrict):
        yield from _calls(term.proc)
    elif isinstance(term, Cond):
        yield from _calls(term.then_branch)
        yield from _calls(term.else_branch)


# ---------------------------------------------------------------------------
# Transition labels


@dataclass(frozen=True)
class Label:
    """A ground transition label: tau, or a visible action with bit arguments.

    ``action is None`` encodes tau.  Visible labels order inputs before
    outputs, then by action name, then by argument tuple.
    """

    action: object = None
    args: tuple = ()
    output: bool = False

    def __post_init__(self):
        if self.action is None and (self.args or self.output):
            raise ValueError("tau carries no name, arguments or polarity")

    @property
    def is_tau(self) -> bool:
        return self.action is None

    def sort_key(self):
        if self.is_tau:
            return (0,)
        return (1, self.output, self.action, self.args)

    def __str__(self):
        if self.is_tau:
            return "tau"
        mark = "'" if self.output else ""
        if self.args:
            return f"{mark}{self.action}({','.join(str(a) for a in self.args)})"
        return f"{mark}{self.action}"


TAU = Label()


# ---------------------------------------------------------------------------
# Mu-calculus formulas


@dataclass(frozen=True)
class ExactLabel:
    """Matches one specific visible label."""

    label: Label

    def __post_init__(self):
        if self.label.is_tau:
            raise ValueError("exact patterns must be visible labels")


@dataclass(frozen=True)
class TauOnly:
    """Matches the internal action only."""


@dataclass(frozen=True)
class AnyVisible:
    """Matches every visible label."""


LabelPattern = Union[ExactLabel, TauOnly, AnyVisible]


def matches(pattern: LabelPattern, label: Label) -> bool:
    if isinstance(pattern, ExactLabel):
        return label == pattern.label
    if isinstance(pattern, TauOnly):
        return label.is_tau
    return not label.is_tau


@dataclass(frozen=True)
class Tt:
    pass


@dataclass(frozen=True)
class Ff:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diamond:
    """Possibility modality; weak form abstracts tau steps on either side."""

    pattern: LabelPattern
    body: "Formula"
    weak: bool = False


@dataclass(frozen=True)
class Box:
    """Necessity modality, dual to Diamond."""

    pattern: LabelPattern
    body: "Formula"
    weak: bool = False


@dataclass(frozen=True)
class FixVar:
    name: str


@dataclass(frozen=True)
class Mu:
    """Least fixpoint."""

    name: str
    body: "Formula"


@dataclass(frozen=True)
class Nu:
    """Greatest fixpoint."""

    name: str
    body: "Formula"


Formula = Union[Tt, Ff, And, Or, Diamond, Box, FixVar, Mu, Nu]

TT = Tt()
FF = Ff()


def free_fix_vars(f: Formula) -> frozenset:
    if isinstance(f, FixVar):
        return frozenset([f.name])
    if isinstance(f, (And, Or)):
        return free_fix_vars(f.left) | free_fix_vars(f.right)
    if isinstance(f, (Diamond, Box)):
        return free_fix_vars(f.body)
    if isinstance(f, (Mu, Nu)):
        return free_fix_vars(f.body) - {f.name}
    return frozenset()


# ---------------------------------------------------------------------------
# Operations on terms


def eval_value(expr: ValueExpr) -> int:
    if isinstance(expr, Lit):
        return expr.value
    raise ValueError(f"cannot evaluate open value expression {expr!r}")


def eval_bool(expr: BoolExpr) -> bool:
    """Evaluate a ground boolean expression.  Raises on free variables."""
    same = eval_value(expr.left) == eval_value(expr.right)
    return same if isinstance(expr, Eq) else not same


def _subst_value(expr: ValueExpr, binding: Mapping[str, int]) -> ValueExpr:
    if isinstance(expr, Var) and expr.name in binding:
        return Lit(binding[expr.name])
    return expr


def _subst_bool(expr: BoolExpr, binding: Mapping[str, int]) -> BoolExpr:
    cls = type(expr)
    return cls(_subst_value(expr.left, binding), _subst_value(expr.right, binding))


def substitute(term: Proc, binding: Mapping[str, int]) -> Proc:
    """Replace free value variables by literal bits.

    Input binders shadow the binding within their continuation.
    """
    if not binding:
        return term
    if isinstance(term, Nil):
        return term
    if isinstance(term, Act):
        p = term.prefix
        if p.output:
            args = tuple(_subst_value(a, binding) for a in p.args)
            return Act(Prefix(True, p.action, args), substitute(term.cont, binding))
        inner = {k: v for k, v in binding.items() if k not in p.args}
        return Act(p, substitute(term.cont, inner))
    if isinstance(term, Choice):
        return Choice(substitute(term.left, binding), substitute(term.right, binding))
    if isinstance(term, Par):
        return Par(substitute(term.left, binding), substitute(term.right, binding))
    if isinstance(term, Restrict):
        return Restrict(substitute(term.proc, binding), term.names)
    if isinstance(term, Cond):
        return Cond(_subst_bool(term.test, binding),
                    substitute(term.then_branch, binding),
                    substitute(term.else_branch, binding))
    if isinstance(term, Call):
        return Call(term.name, tuple(_subst_value(a, binding) for a in term.args))
    raise TypeError(f"not a process term: {term!r}")


def _value_vars(expr: ValueExpr) -> frozenset:
    return frozenset([expr.name]) if isinstance(expr, Var) else frozenset()


def free_value_vars(term: Proc) -> frozenset:
    """The value variables occurring free in a process term."""
    if isinstance(term, Nil):
        return frozenset()
    if isinstance(term, Act):
        p = term.prefix
        if p.output:
            own = frozenset().union(*(_value_vars(a) for a in p.args)) if p.args else frozenset()
            return own | free_value_vars(term.cont)
        return free_value_vars(term.cont) - frozenset(p.args)
    if isinstance(term, (Choice, Par)):
        return free_value_vars(term.left) | free_value_vars(term.right)
    if isinstance(term, Restrict):
        return free_value_vars(term.proc)
    if isinstance(term, Cond):
        t = term.test
        return (_value_vars(t.left) | _value_vars(t.right)
                | free_value_vars(term.then_branch)
                | free_value_vars(term.else_branch))
    if isinstance(term, Call):
        if not term.args:
            return frozenset()
        return frozenset().union(*(_value_vars(a) for a in term.args))
    raise TypeError(f"not a process term: {term!r}")


def is_ground(term: Proc) -> bool:
    return not free_value_vars(term)


def all_bindings(names) -> Iterator[dict]:
    """Every assignment of bit values to the given names, in numeric order."""
    names = tuple(names)
    for bits in itertools.product(VALUES, repeat=len(names)):
        yield dict(zip(names, bits))
