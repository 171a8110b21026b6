from fractions import Fraction

from superdeform.linsolve import RationalField, RatFuncField, ResidueField, analyze, nullspace
from superdeform.scalars import LAM, LamPoly, ONE, RatFunc, ZERO


def test_rank_and_kernel_over_ratfuncs():
    # rows: [1, lam], [lam, lam^2] -> rank 1, kernel spanned by (-lam, 1)
    rows = [[ONE, LAM], [LAM, LAM * LAM]]
    an = analyze(rows, 2, RatFuncField())
    assert an.rank == 1
    (k,) = an.kernel
    assert k[0] * ONE + k[1] * LAM == ZERO


def test_inconsistency_certificate():
    rows = [[ONE, ONE], [ONE, ONE]]
    an = analyze(rows, 2, RatFuncField())
    x, cert = an.solve([ONE, RatFunc.const(2)])
    assert x is None
    combo = cert["combination"]
    # the combination kills the matrix but not the right-hand side
    for col in range(2):
        assert sum((c * rows[i][col] for i, c in combo.items()), ZERO) == ZERO
    assert not cert["value"].is_zero()


def test_specialization_changes_rank():
    rows = [[LAM - 1, ONE], [ONE, ONE]]
    assert analyze(rows, 2, RatFuncField()).rank == 2
    F = RationalField(Fraction(2))
    assert analyze([[F.convert(a) for a in r] for r in rows], 2, F).rank == 1


def test_residue_field_detects_root():
    q = LamPoly([2, 7, 2])
    F = ResidueField(q)
    rows = [[F.convert(RatFunc(q)), F.convert(ONE)]]
    assert F.is_zero(rows[0][0])
    assert len(nullspace([[ONE, LAM]], 2)) == 1
