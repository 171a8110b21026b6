"""Exact linear algebra over Q(lam), Q and residue fields Q[lam]/(q).

Large systems are handled by a two-stage strategy: rows that are independent
after reducing modulo a prime at a random point are independent over the exact
field too, so we select such rows cheaply, eliminate exactly on them only, and
then verify *exactly* that every remaining row lies in their span (a row v is
in the row space of S iff v annihilates the right kernel of S).  A failed
verification just adds the offending row and repeats, so the answer never
depends on the random choice.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .scalars import LamPoly, RatFunc, ONE, ZERO, DivisionByZero, factor_poly

P_DEFAULT = 2147483647


class Pole(ArithmeticError):
    pass


# -- fields -----------------------------------------------------------------

def _frac_mod(c: Fraction, p: int) -> int:
    d = c.denominator % p
    if d == 0:
        raise Pole("denominator divisible by p")
    return c.numerator * pow(d, p - 2, p) % p


def _poly_mod(poly: LamPoly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(poly.c):
        acc = (acc * x + _frac_mod(c, p)) % p
    return acc


class RatFuncField:
    """Q(lam); reduction sends lam to a random residue modulo p."""

    name = "Q(lam)"

    def __init__(self, rng: Optional[random.Random] = None, p: int = P_DEFAULT):
        self.rng = rng or random.Random(12345)
        self.p = p
        self.point = self.rng.randrange(1, p)

    def reroll(self):
        self.point = self.rng.randrange(1, self.p)

    def zero(self):
        return ZERO

    def one(self):
        return ONE

    def convert(self, a):
        return a

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def reduce(self, a: RatFunc) -> int:
        if a.is_zero():
            return 0
        d = _poly_mod(a.den, self.point, self.p)
        if d == 0:
            raise Pole("evaluation point hits a denominator")
        return _poly_mod(a.num, self.point, self.p) * pow(d, self.p - 2, self.p) % self.p

    def weight(self, a: RatFunc) -> int:
        return (len(a.num.c) + len(a.den.c)) * 4 + sum(
            abs(c.numerator).bit_length() + c.denominator.bit_length() for c in a.num.c)


class RationalField:
    """Q, reached from Q(lam) by specializing lam to a rational value."""

    name = "Q"

    def __init__(self, lam0: Fraction, rng: Optional[random.Random] = None, p: int = P_DEFAULT):
        self.lam0 = Fraction(lam0)
        self.p = p
        self.rng = rng or random.Random(1)

    def reroll(self):
        self.p = _next_prime(self.rng.randrange(10 ** 8, 10 ** 9))

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def convert(self, a: RatFunc) -> Fraction:
        d = a.den(self.lam0)
        if d == 0:
            raise Pole(f"pole at lam = {self.lam0}")
        return a.num(self.lam0) / d

    def is_zero(self, a) -> bool:
        return a == 0

    def reduce(self, a: Fraction) -> int:
        return _frac_mod(a, self.p)

    def weight(self, a: Fraction) -> int:
        return a.numerator.bit_length() + a.denominator.bit_length()


class Residue:
    """Element of Q[lam]/(q), q irreducible; stored as a reduced LamPoly."""

    __slots__ = ("v", "F")

    def __init__(self, v: LamPoly, F: "ResidueField"):
        self.v = v if v.degree < F.q.degree else v.divmod(F.q)[1]
        self.F = F

    def __add__(self, o):
        return Residue(self.v + o.v, self.F)

    def __sub__(self, o):
        return Residue(self.v - o.v, self.F)

    def __neg__(self):
        return Residue(-self.v, self.F)

    def __mul__(self, o):
        return Residue(self.v * o.v, self.F)

    def __truediv__(self, o):
        return self * o.inverse()

    def inverse(self) -> "Residue":
        if self.v.is_zero():
            raise DivisionByZero("inverse of zero in residue field")
        # extended Euclid: s*v + t*q = 1
        r0, r1 = self.F.q, self.v
        s0, s1 = LamPoly.const(0), LamPoly.const(1)
        while not r1.is_zero():
            qt, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - qt * s1
        if r0.degree != 0:
            raise DivisionByZero("modulus is not irreducible")
        return Residue(s0.scale(1 / r0.c[0]), self.F)

    def is_zero(self) -> bool:
        return self.v.is_zero()

    def render(self) -> str:
        return f"{self.v.render()} mod ({self.F.q.render()})"

    def __repr__(self):
        return f"[{self.render()}]"


class ResidueField:
    """Q[lam]/(q) for an irreducible q: exact arithmetic at an algebraic root of q."""

    def __init__(self, q: LamPoly, rng: Optional[random.Random] = None):
        self.q = q.primitive()
        self.name = f"Q[lam]/({self.q.render()})"
        self.rng = rng or random.Random(7)
        self.p, self.point = _prime_with_root(self.q, self.rng)

    def reroll(self):
        self.p, self.point = _prime_with_root(self.q, self.rng)

    def zero(self):
        return Residue(LamPoly.const(0), self)

    def one(self):
        return Residue(LamPoly.const(1), self)

    def convert(self, a: RatFunc) -> Residue:
        d = Residue(a.den, self)
        if d.is_zero():
            raise Pole(f"pole along {self.q.render()}")
        return Residue(a.num, self) / d

    def is_zero(self, a: Residue) -> bool:
        return a.is_zero()

    def reduce(self, a: Residue) -> int:
        return _poly_mod(a.v, self.point, self.p)

    def weight(self, a: Residue) -> int:
        return len(a.v.c)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _next_prime(n: int) -> int:
    while not _is_prime(n):
        n += 1
    return n


def _prime_with_root(q: LamPoly, rng: random.Random):
    """A prime p and an integer r with q(r) = 0 mod p (p > 10^4)."""
    while True:
        p = _next_prime(rng.randrange(20000, 200000))
        try:
            for r in range(p):
                if _poly_mod(q, r, p) == 0:
                    return p, r
        except Pole:
            continue


# -- elimination ------------------------------------------------------------

def _modp_select(rows_mod: List[List[int]], p: int, n: int, preselected: Sequence[int] = ()) -> List[int]:
    """Greedy selection of rows independent modulo p."""
    basis = {}  # pivot col -> reduced row
    chosen = []

    def reduce(v):
        v = list(v)
        for col in sorted(basis):
            if v[col]:
                f = v[col]
                b = basis[col]
                for j in range(col, n):
                    if b[j]:
                        v[j] = (v[j] - f * b[j]) % p
        return v

    order = list(preselected) + [i for i in range(len(rows_mod)) if i not in set(preselected)]
    for i in order:
        v = reduce(rows_mod[i])
        piv = next((j for j in range(n) if v[j]), None)
        if piv is None:
            continue
        inv = pow(v[piv], p - 2, p)
        v = [x * inv % p for x in v]
        for col, b in basis.items():
            if b[piv]:
                f = b[piv]
                basis[col] = [(b[j] - f * v[j]) % p for j in range(n)]
        basis[piv] = v
        chosen.append(i)
        if len(basis) == n:
            break
    return chosen


def rref(rows: List[list], n: int, F, width: Optional[int] = None) -> tuple:
    """Gauss-Jordan elimination; returns (reduced rows, pivot columns, pivot values divided by).

    Pivots are taken in the first ``n`` columns; row operations act on the first
    ``width`` columns (default ``n``), so extra columns can carry a transform along.
    """
    width = n if width is None else width
    rows = [list(r) for r in rows]
    pivots = []
    divisors = []
    r = 0
    for col in range(n):
        best = None
        for i in range(r, len(rows)):
            a = rows[i][col]
            if not F.is_zero(a):
                w = F.weight(a)
                if best is None or w < best[0]:
                    best = (w, i)
        if best is None:
            continue
        i = best[1]
        rows[r], rows[i] = rows[i], rows[r]
        pv = rows[r][col]
        divisors.append(pv)
        inv = F.one() / pv
        rows[r] = [a * inv if not F.is_zero(a) else a for a in rows[r]]
        for k in range(len(rows)):
            if k != r:
                f = rows[k][col]
                if not F.is_zero(f):
                    rk, rr = rows[k], rows[r]
                    rows[k] = [rk[j] - f * rr[j] if not F.is_zero(rr[j]) else rk[j] for j in range(width)]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots, divisors


def _kernel_from_rref(R: List[list], pivots: List[int], n: int, F) -> List[list]:
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for fcol in free:
        v = [F.zero() for _ in range(n)]
        v[fcol] = F.one()
        for row, pc in zip(R, pivots):
            a = row[fcol]
            if not F.is_zero(a):
                v[pc] = -a
        basis.append(v)
    return basis


def _dot(u, v, F):
    acc = F.zero()
    for a, b in zip(u, v):
        if not F.is_zero(a) and not F.is_zero(b):
            acc = acc + a * b
    return acc


@dataclass
class Analysis:
    """Result of ``analyze``: exact rank data of a matrix over a field."""

    field: object
    n: int
    rows: List[list]
    selected: List[int]
    rref_rows: List[list]
    pivots: List[int]
    divisors: list
    kernel: List[list]

    @property
    def rank(self) -> int:
        return len(self.selected)

    def solve(self, rhs: list):
        """Particular solution of M x = rhs (free variables zero) or a certificate of inconsistency."""
        F = self.field
        sel_rows = [self.rows[i] + [rhs[i]] for i in self.selected]
        R, piv, _ = rref(sel_rows, self.n + 1, F)
        x = [F.zero() for _ in range(self.n)]
        for row, pc in zip(R, piv):
            if pc == self.n:
                raise AssertionError("selected rows are dependent")
            x[pc] = row[self.n]
        for i, row in enumerate(self.rows):
            if not F.is_zero(_dot(row, x, F) - rhs[i]):
                return None, self.certificate(i, rhs)
        return x, None

    def certificate(self, i: int, rhs: list) -> dict:
        """y with y^T M = 0 and y^T rhs != 0, supported on row i and the selected rows."""
        F = self.field
        # express row i in terms of the selected rows: S^T y = row_i^T
        S = [self.rows[j] for j in self.selected]
        cols = [[S[a][c] for a in range(len(S))] + [self.rows[i][c]] for c in range(self.n)]
        R, piv, _ = rref(cols, len(S) + 1, F)
        y = [F.zero() for _ in range(len(S))]
        for row, pc in zip(R, piv):
            if pc < len(S):
                y[pc] = row[len(S)]
        combo = {i: F.one()}
        for a, j in enumerate(self.selected):
            if not F.is_zero(y[a]):
                combo[j] = -y[a]
        value = F.zero()
        for j, c in combo.items():
            value = value + c * rhs[j]
        return {"row": i, "combination": combo, "value": value}


def analyze(rows: List[list], n: int, F, max_rounds: int = 20) -> Analysis:
    """Exact rank, pivot rows and right kernel of ``rows`` over the field F."""
    rows = [list(r) for r in rows]
    pre: List[int] = []
    for _ in range(max_rounds):
        try:
            red = [[F.reduce(a) if not F.is_zero(a) else 0 for a in r] for r in rows]
        except Pole:
            F.reroll()
            continue
        sel = _modp_select(red, F.p, n, pre)
        R, piv, divs = rref([rows[i] for i in sel], n, F)
        if len(piv) < len(sel):
            F.reroll()
            continue
        ker = _kernel_from_rref(R, piv, n, F)
        bad = None
        for i, r in enumerate(rows):
            if i in sel:
                continue
            for k in ker:
                if not F.is_zero(_dot(r, k, F)):
                    bad = i
                    break
            if bad is not None:
                break
        if bad is None:
            return Analysis(F, n, rows, sel, R, piv, divs, ker)
        pre = sel + [bad]
        F.reroll()
    raise RuntimeError("rank determination did not stabilize")


def nullspace(mat: List[list], n: int, F=None) -> List[list]:
    F = F or RatFuncField()
    if not mat:
        return [[F.one() if i == j else F.zero() for i in range(n)] for j in range(n)]
    return analyze(mat, n, F).kernel


def divisor_factors(divisors) -> List[LamPoly]:
    """Irreducible factors of the numerators and denominators of pivot values."""
    out = []
    seen = set()
    for d in divisors:
        if not isinstance(d, RatFunc) or d.is_const():
            continue
        for poly in (d.num, d.den):
            if poly.is_const():
                continue
            for f, _ in factor_poly(poly):
                if f.c not in seen:
                    seen.add(f.c)
                    out.append(f)
    return out
