from fractions import Fraction

import pytest

from oracles import transvectant_coefficient
from superdeform.densities import Weight
from superdeform.scalars import RatFunc
from superdeform.transvectants import (TransvectantSpec, check_osp_invariance, kernel_transvectant,
                                       printed_coefficient, printed_transvectant)

LAM = Weight.lam()
KS = [Fraction(k, 2) for k in range(1, 12)]


@pytest.mark.parametrize("k", KS)
def test_coefficients_match_numeric_oracle(k):
    for alpha, beta in [(Fraction(-1), Fraction(7, 3)), (Fraction(5, 4), Fraction(11, 5))]:
        for i in range(int(2 * k) + 1):
            j = int(2 * k) - i
            for pf in (0, 1):
                got = printed_coefficient(k, i, j, pf, RatFunc.const(alpha), RatFunc.const(beta))
                assert got == RatFunc.const(transvectant_coefficient(k, i, j, pf, alpha, beta))


@pytest.mark.parametrize("k", KS)
def test_invariance_symbolic(k):
    for alpha, beta in [(LAM, LAM), (Weight.const(Fraction(-1, 2)), LAM), (LAM, Weight.const(5)),
                        (Weight(2, Fraction(1, 2)), Weight(-1, Fraction(0)))]:
        assert check_osp_invariance(TransvectantSpec(alpha, beta, k), 6).ok


def test_invariance_for_cocycle_usage():
    # J^{-1,lam}_k enters the second-order witnesses
    for k in (Fraction(9, 2), Fraction(5), Fraction(11, 2)):
        assert check_osp_invariance(TransvectantSpec(Weight.const(-1), LAM, k), 8).ok


def test_kernel_table_agrees_with_printed():
    for k in (Fraction(3, 2), Fraction(2), Fraction(5, 2)):
        spec = TransvectantSpec(Weight.const(-1), LAM, k)
        assert kernel_transvectant(spec) == printed_transvectant(spec)


def test_invariance_negative_control():
    spec = TransvectantSpec(Weight.const(-1), LAM, Fraction(2))
    J = printed_transvectant(spec)
    (pars, ds), c = next(iter(J.items()))
    bad = J.copy_empty()
    for (p, d), cc in J.items():
        bad.add_term(p, d, cc if (p, d) != (pars, ds) else cc + 1)
    assert not check_osp_invariance(spec, 6, J=bad).ok
