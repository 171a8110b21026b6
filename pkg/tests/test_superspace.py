import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superdeform.scalars import RatFunc
from superdeform.superspace import NonHomogeneous, SuperPoly, d_x, eta, eta_bar, random_superpoly

seeds = st.integers(min_value=0, max_value=10 ** 6)


def test_theta_squared_vanishes():
    th = SuperPoly.monomial(1, 0)
    assert (th * th).is_zero()


def test_render_formats():
    assert SuperPoly.monomial(0, 5, -80).render() == "-80*x^5"
    assert SuperPoly.monomial(1, 8, -240).render() == "th*-240*x^8"
    assert SuperPoly.monomial(0, 3, Fraction(1, 2)).render() == "(1/2)*x^3"


def test_etabar_squared_is_minus_dx_on_example():
    # etabar^2 = -d/dx, so etabar^2(x^2) = -2x
    assert eta_bar(eta_bar(SuperPoly.monomial(0, 2))) == SuperPoly.monomial(0, 1, -2)


@given(seeds, st.integers(0, 1))
def test_eta_identities(seed, p):
    F = random_superpoly(random.Random(seed), p, 6, lam=True)
    assert eta_bar(eta_bar(F)) == -d_x(F)
    assert eta(eta(F)) == d_x(F)
    # eta and etabar anticommute
    assert (eta(eta_bar(F)) + eta_bar(eta(F))).is_zero()


@given(seeds, st.integers(0, 1), st.integers(0, 1))
def test_etabar_is_odd_derivation(seed, p, q):
    rng = random.Random(seed)
    F, G = random_superpoly(rng, p, 4), random_superpoly(rng, q, 4)
    sign = -1 if p else 1
    assert eta_bar(F * G) == eta_bar(F) * G + (F * eta_bar(G)).scale(RatFunc.const(sign))


def test_inhomogeneous_rejected():
    F = SuperPoly.monomial(0, 1) + SuperPoly.monomial(1, 0)
    with pytest.raises(NonHomogeneous):
        F.require_homogeneous()
