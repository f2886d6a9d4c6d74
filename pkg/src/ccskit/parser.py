"""Concrete syntax: parsing of model files and formula strings, plus
canonical pretty-printing.

Model grammar (tightest binding first): prefix-dot, restriction ``\\{...}``,
``+``, ``|``; ``if``/``then``/``else`` extends as far right as possible;
``+`` and ``|`` associate to the right.  A leading apostrophe marks an
output (co-)action.  ``#`` starts a line comment; a definition may span
lines while a parenthesis is open.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional

from .syntax import (
    NIL, TT, FF, Act, And, AnyVisible, Box, Call, Choice, Cond, Definition,
    Diamond, Eq, ExactLabel, Ff, FixVar, Formula, Label, Lit, Model, Mu, Neq,
    Nil, Nu, Or, Par, Prefix, Proc, Restrict, TauOnly, Tt, Var, free_fix_vars,
)

KEYWORDS = {"if", "then", "else"}
FORMULA_KEYWORDS = {"tt", "ff", "min", "max", "tau"}


class SourceError(Exception):
    """A parse or semantic error with a 1-based source position."""

    def __init__(self, line: int, column: int, message: str, expected=()):
        self.line = line
        self.column = column
        self.message = message
        self.expected = list(expected)
        detail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{column}: {message}{detail}")


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


_MODEL_TOKEN = re.compile(r"""
    (?P<ws>[^\S\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<num>[01])
  | (?P<op>!=|[.+|\\{}(),='])
""", re.VERBOSE)

_FORMULA_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<num>[01])
  | (?P<op><<|>>|\[\[|\]\]|&&|\|\||[<>\[\]().,'-])
""", re.VERBOSE)


def _tokenize(text: str, table: re.Pattern, keep_newlines: bool) -> List[Token]:
    text = text.replace("\r\n", "\n")
    tokens: List[Token] = []
    line, col = 1, 1
    pos = 0
    depth = 0
    while pos < len(text):
        m = table.match(text, pos)
        if m is None:
            raise SourceError(line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        value = m.group()
        if kind == "newline":
            if keep_newlines and depth == 0:
                tokens.append(Token("newline", value, line, col))
            line += 1
            col = 1
        else:
            if kind == "op":
                if value == "(":
                    depth += 1
                elif value == ")":
                    depth = max(0, depth - 1)
                kind = value
            if kind not in ("ws", "comment"):
                tokens.append(Token(kind, value, line, col))
            col += len(value)
        pos = m.end()
    end_line = line if col > 1 or not tokens else line
    tokens.append(Token("eof", "", end_line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        if self.cur.kind != kind:
            raise self.error(f"unexpected {self._describe(self.cur)}",
                             [what or repr(kind)])
        return self.advance()

    def error(self, message: str, expected=()) -> SourceError:
        return SourceError(self.cur.line, self.cur.column, message, expected)

    @staticmethod
    def _describe(tok: Token) -> str:
        if tok.kind == "eof":
            return "end of input"
        if tok.kind == "newline":
            return "end of line"
        return repr(tok.text)


class _ModelParser(_Parser):
    """Recursive-descent parser for model files."""

    def parse_model(self) -> Model:
        defs = {}
        call_sites = []  # (def name, Token, target, arity) for late checking
        while True:
            while self.cur.kind == "newline":
                self.advance()
            if self.cur.kind == "eof":
                break
            name_tok = self.cur
            name, params = self._parse_header()
            if name in defs:
                raise SourceError(name_tok.line, name_tok.column,
                                  f"duplicate definition of {name}")
            self._calls = []
            body = self.parse_proc()
            if self.cur.kind not in ("newline", "eof"):
                raise self.error(f"unexpected {self._describe(self.cur)}",
                                 ["end of definition"])
            try:
                defs[name] = Definition(name, params, body)
            except ValueError as exc:
                raise SourceError(name_tok.line, name_tok.column, str(exc))
            call_sites.extend((name, tok, tgt, arity) for tok, tgt, arity in self._calls)
        for _, tok, target, arity in call_sites:
            d = defs.get(target)
            if d is None:
                raise SourceError(tok.line, tok.column,
                                  f"call to undefined process {target}")
            if len(d.params) != arity:
                raise SourceError(
                    tok.line, tok.column,
                    f"{target} takes {len(d.params)} argument(s), got {arity}")
        model = Model(defs)
        model.validate()
        return model

    def _parse_header(self):
        name_tok = self.expect("name", "definition name")
        if name_tok.text in KEYWORDS:
            raise SourceError(name_tok.line, name_tok.column,
                              f"{name_tok.text!r} is a reserved word")
        params = ()
        if self.cur.kind == "(":
            self.advance()
            names = []
            while True:
                tok = self.expect("name", "parameter name")
                if tok.text in names:
                    raise SourceError(tok.line, tok.column,
                                      f"duplicate parameter {tok.text}")
                names.append(tok.text)
                if self.cur.kind == ",":
                    self.advance()
                    continue
                break
            self.expect(")", "')'")
            params = tuple(names)
        self.expect("=", "'='")
        return name_tok.text, params

    # precedence: prim/prefix-dot > restriction > '+' > '|'
    def parse_proc(self) -> Proc:
        left = self.parse_sum()
        if self.cur.kind == "|":
            self.advance()
            return Par(left, self.parse_proc())
        return left

    def parse_sum(self) -> Proc:
        left = self.parse_post()
        if self.cur.kind == "+":
            self.advance()
            return Choice(left, self.parse_sum())
        return left

    def parse_post(self) -> Proc:
        term = self.parse_prim()
        while self.cur.kind == "\\":
            self.advance()
            self.expect("{", "'{'")
            names = []
            while True:
                tok = self.expect("name", "action name")
                names.append(tok.text)
                if self.cur.kind == ",":
                    self.advance()
                    continue
                break
            self.expect("}", "'}'")
            term = Restrict(term, frozenset(names))
        return term

    def parse_prim(self) -> Proc:
        tok = self.cur
        if tok.kind == "num" and tok.text == "0":
            self.advance()
            return NIL
        if tok.kind == "(":
            self.advance()
            inner = self.parse_proc()
            self.expect(")", "')'")
            return inner
        if tok.kind == "name" and tok.text == "if":
            self.advance()
            test = self.parse_bexp()
            self._expect_keyword("then")
            then_branch = self.parse_proc()
            self._expect_keyword("else")
            else_branch = self.parse_proc()
            return Cond(test, then_branch, else_branch)
        if tok.kind == "'":
            self.advance()
            name_tok = self.expect("name", "action name")
            args = self._parse_expr_args() if self.cur.kind == "(" else ()
            self.expect(".", "'.'")
            cont = self.parse_prim()
            return Act(self._mk_prefix(name_tok, True, args), cont)
        if tok.kind == "name":
            if tok.text in KEYWORDS:
                raise self.error(f"unexpected keyword {tok.text!r}",
                                 ["process expression"])
            self.advance()
            arg_toks = None
            if self.cur.kind == "(":
                arg_toks = self._parse_expr_args(keep_tokens=True)
            if self.cur.kind == ".":
                self.advance()
                binders = []
                for expr, etok in (arg_toks or ()):
                    if not isinstance(expr, Var):
                        raise SourceError(etok.line, etok.column,
                                          "input binder must be an identifier")
                    binders.append(expr.name)
                cont = self.parse_prim()
                return Act(self._mk_prefix(tok, False, tuple(binders)), cont)
            args = tuple(expr for expr, _ in (arg_toks or ()))
            self._calls.append((tok, tok.text, len(args)))
            return Call(tok.text, args)
        raise self.error(f"unexpected {self._describe(tok)}",
                         ["process expression"])

    def _mk_prefix(self, name_tok: Token, output: bool, args) -> Prefix:
        try:
            return Prefix(output, name_tok.text, tuple(args))
        except ValueError as exc:
            raise SourceError(name_tok.line, name_tok.column, str(exc))

    def _expect_keyword(self, word: str):
        if self.cur.kind != "name" or self.cur.text != word:
            raise self.error(f"unexpected {self._describe(self.cur)}", [repr(word)])
        self.advance()

    def _parse_expr_args(self, keep_tokens: bool = False):
        self.expect("(", "'('")
        out = []
        while True:
            tok = self.cur
            expr = self.parse_vexpr()
            out.append((expr, tok) if keep_tokens else expr)
            if self.cur.kind == ",":
                self.advance()
                continue
            break
        self.expect(")", "')'")
        return tuple(out)

    def parse_vexpr(self):
        tok = self.cur
        if tok.kind == "num":
            self.advance()
            return Lit(int(tok.text))
        if tok.kind == "name" and tok.text not in KEYWORDS:
            self.advance()
            return Var(tok.text)
        raise self.error(f"unexpected {self._describe(tok)}", ["value expression"])

    def parse_bexp(self):
        left = self.parse_vexpr()
        if self.cur.kind == "=":
            self.advance()
            return Eq(left, self.parse_vexpr())
        if self.cur.kind == "!=":
            self.advance()
            return Neq(left, self.parse_vexpr())
        raise self.error(f"unexpected {self._describe(self.cur)}", ["'=' or '!='"])


class _FormulaParser(_Parser):
    """Recursive-descent parser for mu-calculus formulas."""

    def __init__(self, tokens):
        super().__init__(tokens)
        self.bound: List[str] = []

    def parse_formula(self) -> Formula:
        f = self.parse_or()
        if self.cur.kind != "eof":
            raise self.error(f"unexpected {self._describe(self.cur)}",
                             ["end of formula"])
        return f

    def parse_or(self) -> Formula:
        left = self.parse_and()
        if self.cur.kind == "||":
            self.advance()
            return Or(left, self.parse_or())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_atom()
        if self.cur.kind == "&&":
            self.advance()
            return And(left, self.parse_and())
        return left

    def parse_atom(self) -> Formula:
        tok = self.cur
        if tok.kind == "(":
            self.advance()
            inner = self.parse_or()
            self.expect(")", "')'")
            return inner
        if tok.kind == "name":
            if tok.text == "tt":
                self.advance()
                return TT
            if tok.text == "ff":
                self.advance()
                return FF
            if tok.text in ("min", "max"):
                self.advance()
                var = self.expect("name", "fixpoint variable")
                if var.text in FORMULA_KEYWORDS:
                    raise SourceError(var.line, var.column,
                                      f"{var.text!r} is a reserved word")
                self.expect(".", "'.'")
                self.bound.append(var.text)
                body = self.parse_or()
                self.bound.pop()
                return (Mu if tok.text == "min" else Nu)(var.text, body)
            if tok.text == "tau":
                raise self.error("'tau' is not a formula", ["formula"])
            self.advance()
            if tok.text not in self.bound:
                raise SourceError(tok.line, tok.column,
                                  f"unbound fixpoint variable {tok.text}")
            return FixVar(tok.text)
        if tok.kind in ("<", "<<", "[", "[["):
            self.advance()
            pattern = self.parse_pattern()
            closing = {"<": ">", "<<": ">>", "[": "]", "[[": "]]"}[tok.kind]
            self.expect(closing, repr(closing))
            body = self.parse_atom()
            weak = tok.kind in ("<<", "[[")
            if tok.kind in ("<", "<<"):
                return Diamond(pattern, body, weak)
            return Box(pattern, body, weak)
        raise self.error(f"unexpected {self._describe(tok)}", ["formula"])

    def parse_pattern(self):
        tok = self.cur
        if tok.kind == "-":
            self.advance()
            return AnyVisible()
        output = False
        if tok.kind == "'":
            self.advance()
            output = True
        name_tok = self.expect("name", "action name")
        if name_tok.text == "tau":
            if output:
                raise SourceError(name_tok.line, name_tok.column,
                                  "tau has no co-action")
            return TauOnly()
        args = []
        if self.cur.kind == "(":
            self.advance()
            while True:
                num = self.expect("num", "0 or 1")
                args.append(int(num.text))
                if self.cur.kind == ",":
                    self.advance()
                    continue
                break
            self.expect(")", "')'")
        return ExactLabel(Label(name_tok.text, tuple(args), output))


def parse_model(text: str) -> Model:
    """Parse a model file into a validated Model."""
    return _ModelParser(_tokenize(text, _MODEL_TOKEN, keep_newlines=True)).parse_model()


def parse_formula(text: str) -> Formula:
    """Parse a formula string into a closed Formula."""
    return _FormulaParser(
        _tokenize(text, _FORMULA_TOKEN, keep_newlines=False)).parse_formula()


# ---------------------------------------------------------------------------
# Pretty-printing.  parse(print(x)) is structurally equal to x.

_PAR, _SUM, _POST, _PRIM = 0, 1, 2, 3


def _print_vexpr(e) -> str:
    return str(e.value) if isinstance(e, Lit) else e.name


def _print_bexp(e) -> str:
    op = "=" if isinstance(e, Eq) else "!="
    return f"{_print_vexpr(e.left)} {op} {_print_vexpr(e.right)}"


def _print_prefix(p: Prefix) -> str:
    mark = "'" if p.output else ""
    if not p.args:
        return f"{mark}{p.action}"
    args = ",".join(a if isinstance(a, str) else _print_vexpr(a) for a in p.args)
    return f"{mark}{p.action}({args})"


def _print_proc(term: Proc, level: int) -> str:
    if isinstance(term, Nil):
        return "0"
    if isinstance(term, Call):
        if not term.args:
            return term.name
        return f"{term.name}({','.join(_print_vexpr(a) for a in term.args)})"
    if isinstance(term, Act):
        s = f"{_print_prefix(term.prefix)} . {_print_proc(term.cont, _PRIM)}"
        return s if level <= _PRIM else f"({s})"
    if isinstance(term, Restrict):
        names = ", ".join(sorted(term.names))
        s = f"{_print_proc(term.proc, _POST)} \\ {{{names}}}"
        return s if level <= _POST else f"({s})"
    if isinstance(term, Choice):
        s = f"{_print_proc(term.left, _POST)} + {_print_proc(term.right, _SUM)}"
        return s if level <= _SUM else f"({s})"
    if isinstance(term, Par):
        s = f"{_print_proc(term.left, _SUM)} | {_print_proc(term.right, _PAR)}"
        return s if level <= _PAR else f"({s})"
    if isinstance(term, Cond):
        # 'if' extends maximally right, so it is only safe unparenthesized at
        # the top level; parenthesize everywhere for a deterministic reparse.
        return (f"(if {_print_bexp(term.test)}"
                f" then {_print_proc(term.then_branch, _PAR)}"
                f" else {_print_proc(term.else_branch, _PAR)})")
    raise TypeError(f"not a process term: {term!r}")


def print_model(m: Model) -> str:
    """Render a model as canonical concrete syntax, one definition per line."""
    lines = []
    for d in m.definitions.values():
        head = d.name if not d.params else f"{d.name}({','.join(d.params)})"
        lines.append(f"{head} = {_print_proc(d.body, _PAR)}")
    return "\n".join(lines) + ("\n" if lines else "")


_F_OR, _F_AND, _F_ATOM = 0, 1, 2


def _print_pattern(p) -> str:
    if isinstance(p, AnyVisible):
        return "-"
    if isinstance(p, TauOnly):
        return "tau"
    return str(p.label)


def _print_formula(f: Formula, level: int) -> str:
    if isinstance(f, Tt):
        return "tt"
    if isinstance(f, Ff):
        return "ff"
    if isinstance(f, FixVar):
        return f.name
    if isinstance(f, Or):
        s = f"{_print_formula(f.left, _F_AND)} || {_print_formula(f.right, _F_OR)}"
        return s if level <= _F_OR else f"({s})"
    if isinstance(f, And):
        s = f"{_print_formula(f.left, _F_ATOM)} && {_print_formula(f.right, _F_AND)}"
        return s if level <= _F_AND else f"({s})"
    if isinstance(f, Diamond):
        open_, close = ("<<", ">>") if f.weak else ("<", ">")
        return f"{open_}{_print_pattern(f.pattern)}{close} {_print_formula(f.body, _F_ATOM)}"
    if isinstance(f, Box):
        open_, close = ("[[", "]]") if f.weak else ("[", "]")
        return f"{open_}{_print_pattern(f.pattern)}{close} {_print_formula(f.body, _F_ATOM)}"
    if isinstance(f, (Mu, Nu)):
        kw = "min" if isinstance(f, Mu) else "max"
        # fixpoint bodies extend maximally right; always parenthesize.
        return f"({kw} {f.name} . {_print_formula(f.body, _F_OR)})"
    raise TypeError(f"not a formula: {f!r}")


def print_formula(f: Formula) -> str:
    """Render a formula as canonical concrete syntax."""
    return _print_formula(f, _F_OR)
