import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_formula
from goedellab import formulas as F
from goedellab.errors import NotClosed, ParseError


def test_parse_core_connectives():
    f = F.parse_formula("~Dem(x0) -> 0 = S(0)")
    assert f == F.Implies(F.Not(F.Dem(F.Var(0))), F.Eq(F.ZERO, F.Succ(F.ZERO)))


def test_parse_forall_scopes_to_the_right():
    f = F.parse_formula("forall x1. x1 = x1 -> x1 = x1")
    assert isinstance(f, F.ForAll)
    assert isinstance(f.body, F.Implies)


def test_abbreviations_desugar():
    a, b = F.Dem(F.Var(0)), F.Eq(F.ZERO, F.ZERO)
    assert F.parse_formula("Dem(x0) & 0 = 0") == F.Not(F.Implies(a, F.Not(b)))
    assert F.parse_formula("Dem(x0) | 0 = 0") == F.Implies(F.Not(a), b)
    assert F.parse_formula("exists x0. Dem(x0)") == F.Not(F.ForAll(0, F.Not(a)))
    iff = F.parse_formula("Dem(x0) <-> 0 = 0")
    assert iff == F.Not(F.Implies(F.Implies(a, b), F.Not(F.Implies(b, a))))


def test_print_parenthesizes_quantifier_on_the_left_of_arrow():
    f = F.Implies(F.ForAll(0, F.Eq(F.Var(0), F.Var(0))), F.Eq(F.ZERO, F.ZERO))
    text = F.print_formula(f)
    assert F.parse_formula(text) == f


def test_numerals():
    assert F.numeral(0) == F.ZERO
    assert F.numeral(3) == F.Succ(F.Succ(F.Succ(F.ZERO)))
    assert F.numeral_value(F.numeral(169)) == 169
    # past the chain limit the compact literal is used
    big = F.parse_term("S(" * 1 + "0" + ")" * 1)
    assert F.numeral_value(big) == 1


def test_parse_large_decimal_literal_is_compact():
    t = F.parse_term("7091786130187500000")
    assert isinstance(t, F.Num)
    assert F.numeral_value(t) == 7091786130187500000


def test_free_vars_and_substitute():
    f = F.parse_formula("forall x1. x0 = x1")
    assert F.free_vars(f) == {0}
    g = F.substitute(f, 0, F.numeral(2))
    assert F.print_formula(g) == "forall x1. S(S(0)) = x1"
    with pytest.raises(NotClosed):
        F.substitute(f, 0, F.Var(2))


def test_substitute_respects_binding():
    f = F.parse_formula("forall x0. x0 = x0")
    assert F.substitute(f, 0, F.ZERO) == f


def test_parse_errors_carry_position():
    with pytest.raises(ParseError):
        F.parse_formula("Dem(x0) ->")
    with pytest.raises(ParseError):
        F.parse_formula("0 = 0 extra")
    with pytest.raises(ParseError):
        F.parse_formula("forall 0. 0 = 0")


def test_round_trip_seeded_sample():
    rng = random.Random(7)
    for _ in range(500):
        f = random_formula(rng, rng.randrange(1, 6))
        assert F.parse_formula(F.print_formula(f)) == f


@st.composite
def _terms(draw, depth=3):
    if depth == 0:
        return draw(
            st.sampled_from([F.ZERO, F.Var(0), F.Var(1), F.Num(1500), F.Num(2**40)])
        )
    kind = draw(st.integers(0, 4))
    if kind == 0:
        return F.Succ(draw(_terms(depth=depth - 1)))
    if kind == 1:
        return F.Sub(draw(_terms(depth=depth - 1)), draw(_terms(depth=depth - 1)))
    if kind == 2:
        return F.Diag(draw(_terms(depth=depth - 1)))
    return draw(_terms(depth=0))


@st.composite
def _formulas(draw, depth=3):
    if depth == 0:
        return draw(
            st.sampled_from([F.Dem(F.Var(0)), F.Eq(F.ZERO, F.Var(1)), F.Dem(F.ZERO)])
        )
    kind = draw(st.integers(0, 4))
    if kind == 0:
        return F.Not(draw(_formulas(depth=depth - 1)))
    if kind == 1:
        return F.Implies(draw(_formulas(depth=depth - 1)), draw(_formulas(depth=depth - 1)))
    if kind == 2:
        return F.ForAll(draw(st.integers(0, 2)), draw(_formulas(depth=depth - 1)))
    if kind == 3:
        return F.Eq(draw(_terms(depth=depth - 1)), draw(_terms(depth=depth - 1)))
    return F.Dem(draw(_terms(depth=depth - 1)))


@settings(max_examples=200, deadline=None)
@given(_formulas())
def test_printer_parser_round_trip_property(f):
    assert F.parse_formula(F.print_formula(f)) == f
