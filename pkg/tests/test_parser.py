import random

import pytest

from ccskit.parser import (
    SourceError, parse_formula, parse_model, print_formula, print_model,
)
from ccskit.syntax import (
    Act, Call, Choice, Diamond, ExactLabel, Label, Mu, Par, Prefix, Restrict,
    Tt, Var,
)

from helpers import random_formula, random_model


def test_parse_empty_model():
    assert parse_model("").definitions == {}
    assert parse_model("\n# just a comment\n\n").definitions == {}


def test_parse_simple_definitions():
    m = parse_model("Empty = put(d,b) . Full(d,b)\nFull(d,b) = 0")
    assert set(m.definitions) == {"Empty", "Full"}
    body = m.definitions["Empty"].body
    assert body == Act(Prefix(False, "put", ("d", "b")),
                       Call("Full", (Var("d"), Var("b"))))


def test_parse_error_position():
    with pytest.raises(SourceError) as exc:
        parse_model("A = .")
    assert (exc.value.line, exc.value.column) == (1, 5)


@pytest.mark.parametrize("src,fragment", [
    ("A = 0\nA = 0", "duplicate definition"),
    ("A = B", "undefined"),
    ("A = 0\nB = A(1)", "argument"),
    ("A = a(x,x) . 0", "duplicate binder"),
    ("A(p,p) = 0", "duplicate parameter"),
    ("A = a(0) . 0", "identifier"),
    ("A = 'b . C", "undefined"),
])
def test_semantic_errors_are_source_errors(src, fragment):
    with pytest.raises(SourceError) as exc:
        parse_model(src)
    assert fragment in str(exc.value)


def test_precedence_par_loosest_and_right_assoc():
    m = parse_model("A = 0 + 0 | 0 | 0")
    body = m.definitions["A"].body
    assert isinstance(body, Par)
    assert isinstance(body.left, Choice)
    assert isinstance(body.right, Par)


def test_restriction_binds_tighter_than_choice():
    m = parse_model("A = a . 0 \\ {a} + b . 0")
    body = m.definitions["A"].body
    assert isinstance(body, Choice)
    assert isinstance(body.left, Restrict)


def test_prefix_dot_binds_tighter_than_restriction():
    m = parse_model("A = a . 0 \\ {a}")
    body = m.definitions["A"].body
    assert isinstance(body, Restrict)
    assert isinstance(body.proc, Act)


def test_if_extends_right():
    m = parse_model("A = if 0 = 0 then a . 0 else b . 0 + c . 0")
    body = m.definitions["A"].body
    assert isinstance(body.else_branch, Choice)


def test_continuation_inside_parentheses():
    m = parse_model("A = (a . 0\n  + b . 0)")
    assert isinstance(m.definitions["A"].body, Choice)


def test_crlf_accepted():
    m = parse_model("A = 0\r\nB = 0\r\n")
    assert set(m.definitions) == {"A", "B"}


def test_parse_formula_examples():
    f = parse_formula("<<choose(0)>> <<'keep(1)>> tt")
    assert f == Diamond(ExactLabel(Label("choose", (0,), False)),
                        Diamond(ExactLabel(Label("keep", (1,), True)),
                                Tt(), weak=True),
                        weak=True)
    assert parse_formula("tt") == Tt()
    f = parse_formula("min X . <-> X")
    assert isinstance(f, Mu) and isinstance(f.body, Diamond) and not f.body.weak


def test_formula_unbound_variable_rejected():
    with pytest.raises(SourceError):
        parse_formula("min X . <-> Y")
    with pytest.raises(SourceError):
        parse_formula("X")


def test_formula_syntax_error():
    with pytest.raises(SourceError):
        parse_formula("<<choose(0)>")


def test_print_formula_tt():
    assert print_formula(Tt()) == "tt"


def test_print_model_spec_equation():
    m = parse_model("Spec = choose(x) . (Spec + 'keep(x) . Spec)")
    assert print_model(m) == "Spec = choose(x) . (Spec + 'keep(x) . Spec)\n"


def test_model_round_trip_fuzz():
    rng = random.Random(11)
    for _ in range(600):
        model = random_model(rng)
        assert parse_model(print_model(model)) == model


def test_formula_round_trip_fuzz():
    rng = random.Random(13)
    for _ in range(600):
        f = random_formula(rng)
        assert parse_formula(print_formula(f)) == f


def test_corpus_round_trip():
    from ccskit import corpus
    m = corpus.load_model()
    assert parse_model(print_model(m)) == m
    assert set(m.definitions) == {
        "Empty", "Full", "Alice", "Bob", "Eve", "BB84", "BB84p", "Spec"}
