import random
from fractions import Fraction

from hypothesis import given, strategies as st

from superdeform.contact import (ContactField, basis, check_super_antisymmetry, check_super_jacobi,
                                 contact_bracket, in_osp12_span, osp12_generators)
from superdeform.densities import Density, Weight, act, check_representation, euler_eigenvalue, lie_density
from superdeform.scalars import RatFunc
from superdeform.superspace import SuperPoly, random_superpoly

x = lambda n: SuperPoly.monomial(0, n)  # noqa: E731
thx = lambda n: SuperPoly.monomial(1, n)  # noqa: E731


def test_bracket_small_values():
    # {1, x} = 1, {x, x^2} = x^2, {th, th} = -1/2 * 2 = ... computed by hand below
    assert contact_bracket(x(0), x(1)) == x(0)
    assert contact_bracket(x(1), x(2)) == x(2)
    # {th, th} = 1/2 * etabar(th)^2 = 1/2
    assert contact_bracket(thx(0), thx(0)) == SuperPoly.monomial(0, 0, Fraction(1, 2))


def test_jacobi_and_antisymmetry_degree6():
    assert check_super_jacobi(6).ok
    assert check_super_antisymmetry(6).ok


def test_jacobi_negative_control():
    # a wrong coefficient on the odd part breaks Jacobi
    bad = lambda F, G: contact_bracket(F, G, half=Fraction(1, 3))  # noqa: E731
    rep = check_super_jacobi(4, bracket=bad)
    assert not rep.ok and "triple" in rep.violation


def test_osp_closed_under_bracket():
    gens = [g.generator for g in osp12_generators()]
    for F in gens:
        for G in gens:
            assert in_osp12_span(contact_bracket(F, G))


def test_representation_symbolic_and_special():
    assert check_representation(5).ok
    assert check_representation(4, Weight.const(Fraction(-1, 2))).ok


def test_representation_negative_control():
    assert not check_representation(3, corrupt=True).ok


def test_density_render_and_action():
    d = Density(x(3).scale(RatFunc.const(Fraction(1, 2))), Weight.lam(Fraction(3, 2)))
    assert d.render() == "(1/2)*x^3 * a^(lam+3/2)"
    # L_x (x^m a^mu) = (m + mu) x^m a^mu
    for m in range(4):
        w = Weight.lam(Fraction(1, 2))
        out = act(x(1), Density(x(m), w))
        assert out.coeff == x(m).scale(euler_eigenvalue(m, w))


@given(st.integers(0, 10 ** 6), st.integers(0, 1), st.integers(0, 1))
def test_lie_derivative_is_a_representation_random(seed, p, q):
    rng = random.Random(seed)
    F, G = random_superpoly(rng, p, 3), random_superpoly(rng, q, 3)
    phi = random_superpoly(rng, rng.randint(0, 1), 4)
    mu = RatFunc.lam()
    sgn = -1 if (p and q) else 1
    lhs = lie_density(F, lie_density(G, phi, mu), mu) - lie_density(G, lie_density(F, phi, mu), mu).scale(sgn)
    assert lhs == lie_density(contact_bracket(F, G), phi, mu)


def test_basis_size():
    assert len(basis(8)) == 18
    assert ContactField(thx(3)).render() == "v[th*x^3]"
