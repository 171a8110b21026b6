"""Independent reference implementations used only by the tests."""

import math
from fractions import Fraction


def _ip(q) -> int:
    q = Fraction(q)
    return q.numerator // q.denominator


def _binom(a, b) -> Fraction:
    if b < 0:
        return Fraction(0)
    num = Fraction(1)
    for t in range(b):
        num *= Fraction(a) - t
    return num / math.factorial(b)


def transvectant_coefficient(k, i: int, j: int, pf: int, alpha: Fraction, beta: Fraction) -> Fraction:
    """Closed-form supertransvectant coefficient, evaluated numerically."""
    k = Fraction(k)
    e = 1 if (2 * k).numerator % 2 == 0 else -1
    s = (-1) ** (_ip(Fraction(j + 1, 2)) + j * (i + pf))
    return s * _binom(_ip(k), _ip(Fraction(2 * j + 1 + e, 4))) \
        * _binom(2 * alpha + _ip(k - Fraction(1, 2)), _ip(Fraction(2 * j + 1 - e, 4))) \
        / _binom(2 * beta + _ip(Fraction(j - 1, 2)), _ip(Fraction(j + 1, 2)))


def poly_eval(coeffs, x):
    """Horner evaluation of a low-first coefficient list."""
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc
