import random

import pytest

from ccskit.syntax import (
    NIL, Act, Call, Eq, Lit, Neq, Prefix, Var, eval_bool, free_value_vars,
    substitute,
)
from ccskit.parser import parse_model

from helpers import random_model


FULL_SRC = """\
Empty = put(d,b) . Full(d,b)
Full(d,b) = measure(b2) . (if b2 = b then 'get(d) . Empty else ('get(0) . Empty + 'get(1) . Empty))
"""


def test_eval_bool():
    assert eval_bool(Eq(Lit(0), Lit(0))) is True
    assert eval_bool(Eq(Lit(0), Lit(1))) is False
    assert eval_bool(Neq(Lit(1), Lit(0))) is True


def test_eval_bool_rejects_open_expression():
    with pytest.raises(ValueError):
        eval_bool(Eq(Var("x"), Lit(0)))


def test_substitute_instantiates_full_body():
    model = parse_model(FULL_SRC)
    body = model.definitions["Full"].body
    ground = substitute(body, {"d": 0, "b": 1})
    assert free_value_vars(ground) == frozenset()
    assert free_value_vars(body) == {"d", "b"}


def test_substitute_nil_is_noop():
    assert substitute(NIL, {"x": 1}) is NIL


def test_substitute_respects_input_shadowing():
    # a(x).'c(x): the outer binding for x must not reach under the binder
    term = Act(Prefix(False, "a", ("x",)), Act(Prefix(True, "c", (Var("x"),)), NIL))
    assert substitute(term, {"x": 0}) == term


def test_input_binders_are_not_free():
    model = parse_model(FULL_SRC)
    assert free_value_vars(model.definitions["Empty"].body) == frozenset()


def test_free_vars_of_call_args():
    term = Call("Full", (Var("d"), Lit(1)))
    assert free_value_vars(term) == {"d"}
    assert free_value_vars(NIL) == frozenset()


def test_prefix_rejects_duplicate_binders_and_tau():
    with pytest.raises(ValueError):
        Prefix(False, "a", ("x", "x"))
    with pytest.raises(ValueError):
        Prefix(False, "tau", ())


def _bodies(seed_count=150):
    rng = random.Random(7)
    for _ in range(seed_count):
        model = random_model(rng)
        for d in model.definitions.values():
            yield d


def test_substitution_properties_on_random_terms():
    for d in _bodies():
        term = d.body
        sigma = {p: 1 for p in d.params}
        once = substitute(term, sigma)
        # idempotent when the result is ground in the substituted names
        assert substitute(once, sigma) == once
        # variables outside the term leave it unchanged
        assert substitute(term, {"unused_name": 0}) == term
        # substitution removes exactly the substituted free variables
        assert free_value_vars(once) == free_value_vars(term) - set(sigma)
