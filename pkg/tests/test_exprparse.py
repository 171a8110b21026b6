import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superdeform.densities import Density, Weight
from superdeform.exprparse import (EBNF, SyntaxError, TypeMismatch, category, parse, parse_value,
                                   render_ast, render_value)
from superdeform.superspace import SuperPoly


@pytest.mark.parametrize("src,cat", [
    ("x^2 + th", "poly"),
    ("lam + 3/2", "weight"),
    ("(x + th) * a^(lam + 3/2)", "density"),
    ("v[th*x^2]", "field"),
    ("-(x - 1)^3 / 4", "poly"),
])
def test_categories(src, cat):
    assert category(parse_value(src)) == cat


def test_odd_derivation_squares():
    assert parse_value("eta(eta(x^3))") == parse_value("Dx(x^3)")
    assert parse_value("eta(eta(th*x^2))") == parse_value("Dx(th*x^2)")
    assert parse_value("etabar(etabar(x^2))") == parse_value("-2*x")
    assert parse_value("th^2") == SuperPoly.zero()


def test_density_value():
    d = parse_value("(x + th) * a^(lam + 3/2)")
    assert isinstance(d, Density)
    assert d.weight == Weight.lam() + Fraction(3, 2)


@pytest.mark.parametrize("src,line,col,must", [
    ("1 +", 1, 4, {"x", "th", "("}),
    ("(x))", 1, 4, {"EOF", "+"}),
    ("x +\n  * 2", 2, 3, {"x"}),
    ("v(x)", 1, 2, {"["}),
    ("x ^ th", 1, 5, set()),
])
def test_syntax_error_positions(src, line, col, must):
    with pytest.raises(SyntaxError) as e:
        parse(src)
    assert (e.value.line, e.value.column) == (line, col)
    assert must <= set(e.value.expected)


def test_unknown_character():
    with pytest.raises(SyntaxError) as e:
        parse("x $ 2")
    assert e.value.column == 3


@pytest.mark.parametrize("src", ["v[a^(lam)]", "a^(lam^2)", "a^(lam + 1/3)", "a^(x)", "x + a^(lam)",
                                 "a^(lam) * a^(lam)", "eta(x + th)", "v[x + th]"])
def test_type_mismatch(src):
    with pytest.raises(TypeMismatch):
        parse_value(src)


def test_expectation_enforced():
    with pytest.raises(TypeMismatch):
        parse_value("x", expect="weight")
    assert category(parse_value("3", expect="poly")) == "poly"


# random sources drawn from the grammar
_leaf = st.sampled_from(["x", "th", "lam", "3", "1/2", "x^3", "2"])


def _grow(inner):
    return st.one_of(
        st.tuples(inner, st.sampled_from([" + ", " - ", "*"]), inner).map("".join),
        inner.map(lambda s: f"-({s})"),
        inner.map(lambda s: f"({s})^2"),
        st.tuples(st.sampled_from(["Dx", "eta", "etabar"]), inner).map(lambda t: f"{t[0]}({t[1]})"),
    )


sources = st.recursive(_leaf, _grow, max_leaves=8)


@settings(max_examples=200)
@given(sources)
def test_ast_round_trip(src):
    ast = parse(src)
    assert parse(render_ast(ast)) == ast


@settings(max_examples=200)
@given(sources)
def test_value_round_trip(src):
    try:
        v = parse_value(src)
    except TypeMismatch:
        return
    assert parse_value(render_value(v), expect=category(v)) == v


def test_random_superpoly_round_trip():
    rng = random.Random(20240611)
    for _ in range(200):
        f0 = {d: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for d in range(rng.randint(0, 4))}
        f1 = {d: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for d in range(rng.randint(0, 3))}
        p = SuperPoly.even({d: c for d, c in f0.items() if c}) + SuperPoly.odd({d: c for d, c in f1.items() if c})
        assert parse_value(render_value(p), expect="poly") == p


def test_ebnf_exported():
    assert "expr" in EBNF and "atom" in EBNF
