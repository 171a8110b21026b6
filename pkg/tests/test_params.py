import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import suites
from superdeform.densities import Weight
from superdeform.params import (ParamName, ParamPoly, Provenance, RelationIdeal, echelon,
                                normalize_monomial, span_equal)
from superdeform.scalars import RatFunc

LAM = Weight.lam()


def t(a, b, variant="plain"):
    return ParamName(LAM + Fraction(a), LAM + Fraction(b), variant)


def P(*factors, c=1):
    return ParamPoly.monomial(factors, c)


def test_inadmissible_names():
    with pytest.raises(ValueError):
        ParamName(LAM + 2, LAM)
    with pytest.raises(ValueError):
        ParamName(LAM, Weight.const(0))
    with pytest.raises(ValueError):
        t(0, 1, "hat")


def test_parity_and_render():
    assert t(0, Fraction(3, 2)).parity == 1
    assert t(0, 2).parity == 0
    assert t(0, Fraction(1, 2), "tilde").render().startswith("tt[")


def test_normalize_sign_counts_odd_swaps():
    a, b, c = t(0, Fraction(3, 2)), t(Fraction(3, 2), 3), t(3, 5)
    assert normalize_monomial([a, b]) == (-normalize_monomial([b, a])[0], normalize_monomial([b, a])[1])
    # an even factor commutes with everything
    assert normalize_monomial([c, a])[0] == normalize_monomial([a, c])[0]
    assert normalize_monomial([a, a])[0] == 0
    assert normalize_monomial([c, c])[0] == 1


def test_canonical_order_puts_outer_operator_first():
    a, b = t(0, Fraction(3, 2)), t(Fraction(3, 2), 3)
    _, m = normalize_monomial([a, b])
    assert m == (b, a)


@pytest.mark.parametrize("seed", suites.SEEDS)
def test_sign_laws(seed):
    ok, detail = suites.sign_suite(seed, n=30)
    assert ok, detail


@given(st.integers(min_value=0, max_value=10 ** 6))
def test_odd_square_vanishes(seed):
    rng = random.Random(seed)
    p = suites.rand_parampoly(rng, 1, terms=2)
    assert (p * p).is_zero()


def test_ideal_membership_of_multiples():
    g1 = P(t(Fraction(3, 2), 3), t(0, Fraction(3, 2)))
    g2 = P(t(0, 2), t(2, 4)) - P(t(0, Fraction(5, 2)), t(Fraction(5, 2), 4)).scale(RatFunc.const(3))
    R = RelationIdeal()
    assert R.add(g1, Provenance(2, Fraction(3), "[0,3]"))
    assert R.add(g2, Provenance(2, Fraction(4), "[0,4]"))
    assert not R.add(g1.scale(RatFunc.const(5)), Provenance(2, Fraction(3), "[0,3]"))
    assert len(R) == 2
    extra = t(4, 6)
    assert R.contains(P(extra) * g1)
    assert R.contains(P(extra) * g2 + P(t(3, 5)) * g1)
    assert not R.contains(P(t(0, 2), t(2, 4)))
    assert not R.contains(P(t(3, 5), t(0, Fraction(3, 2))))
    p = P(t(0, 2), t(2, 4))
    red = R.reduce(p)
    assert not red.is_zero() and R.contains(p - red)


def test_reduce_is_idempotent_and_linear():
    rng = random.Random(3)
    gens = [suites.rand_parampoly(rng, 0, terms=2) for _ in range(2)]
    R = RelationIdeal()
    for g in gens:
        R.add(g, Provenance(2, Fraction(2), "w"))
    for _ in range(10):
        p, q = suites.rand_parampoly(rng, 0), suites.rand_parampoly(rng, 0)
        assert R.reduce(R.reduce(p)) == R.reduce(p)
        assert R.reduce(p + q) == R.reduce(p) + R.reduce(q)


def test_span_and_echelon():
    a, b = P(t(0, 2)), P(t(2, 4))
    assert span_equal([a, b], [a + b, a - b])
    assert not span_equal([a], [a, b])
    assert echelon([a + b, a - b, a]) == echelon([b, a])


def test_shift_lam():
    p = P(t(0, 2), c=RatFunc.const(2))
    assert p.shift_lam(Fraction(1, 2)) == P(t(Fraction(1, 2), Fraction(5, 2)), c=RatFunc.const(2))
