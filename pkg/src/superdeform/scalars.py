"""Exact scalars: rationals, polynomials in lam over Q, and the field Q(lam).

All values are immutable.  ``RatFunc`` keeps a canonical form (coprime
numerator/denominator, monic denominator) so that equality is structural.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence, Union

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class DivisionByZero(ZeroDivisionError):
    pass


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot convert {type(v).__name__} to Fraction")


def _trim(cs: Sequence[Fraction]) -> tuple:
    n = len(cs)
    while n and not cs[n - 1]:
        n -= 1
    return tuple(cs[:n])


class LamPoly:
    """Univariate polynomial in lam with rational coefficients (low degree first)."""

    __slots__ = ("c", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        self.c = _trim([_as_fraction(v) for v in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, c: tuple) -> "LamPoly":
        p = object.__new__(cls)
        p.c = c
        p._hash = None
        return p

    @classmethod
    def const(cls, v) -> "LamPoly":
        v = _as_fraction(v)
        return cls._raw((v,) if v else ())

    @classmethod
    def lam(cls) -> "LamPoly":
        return cls._raw((_ZERO, _ONE))

    # -- queries -----------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def lc(self) -> Fraction:
        return self.c[-1] if self.c else _ZERO

    def const_value(self) -> Fraction:
        return self.c[0] if self.c else _ZERO

    def __eq__(self, other):
        if isinstance(other, LamPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == LamPoly.const(other).c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("LamPoly", self.c))
        return self._hash

    def __bool__(self):
        return bool(self.c)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: "LamPoly") -> "LamPoly":
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return LamPoly._raw(_trim(out))

    def __neg__(self) -> "LamPoly":
        return LamPoly._raw(tuple(-v for v in self.c))

    def __sub__(self, other: "LamPoly") -> "LamPoly":
        return self + (-other)

    def __mul__(self, other: "LamPoly") -> "LamPoly":
        a, b = self.c, other.c
        if not a or not b:
            return LamPoly._raw(())
        if len(a) == 1:
            s = a[0]
            return LamPoly._raw(tuple(s * v for v in b)) if s != 1 else other
        if len(b) == 1:
            s = b[0]
            return LamPoly._raw(tuple(s * v for v in a)) if s != 1 else self
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return LamPoly._raw(_trim(out))

    def scale(self, s: Fraction) -> "LamPoly":
        if not s:
            return LamPoly._raw(())
        return LamPoly._raw(tuple(s * v for v in self.c))

    def __pow__(self, e: int) -> "LamPoly":
        out = LamPoly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def divmod(self, other: "LamPoly"):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        r = list(self.c)
        db = other.degree
        inv = 1 / other.lc()
        if len(r) - 1 < db:
            return LamPoly._raw(()), self
        q = [_ZERO] * (len(r) - db)
        bc = other.c
        for k in range(len(r) - 1 - db, -1, -1):
            f = r[k + db] * inv
            q[k] = f
            if f:
                for j in range(db + 1):
                    r[k + j] -= f * bc[j]
        return LamPoly._raw(_trim(q)), LamPoly._raw(_trim(r[:db]))

    def __call__(self, x):
        acc = _ZERO if isinstance(x, (int, Fraction)) else None
        if acc is None:
            acc = x * 0
        for v in reversed(self.c):
            acc = acc * x + v
        return acc

    def shift(self, a) -> "LamPoly":
        """Return p(lam + a)."""
        a = _as_fraction(a)
        if not a or len(self.c) <= 1:
            return self
        out = LamPoly._raw(())
        base = LamPoly._raw((a, _ONE))
        for v in reversed(self.c):
            out = out * base + LamPoly.const(v)
        return out

    def derivative(self) -> "LamPoly":
        return LamPoly._raw(_trim([i * v for i, v in enumerate(self.c)][1:]))

    def monic(self) -> "LamPoly":
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(1 / self.c[-1])

    def primitive(self) -> "LamPoly":
        """Integer-coefficient primitive associate with positive leading coefficient."""
        if not self.c:
            return self
        den = reduce(lambda a, b: a * b // gcd(a, b), (v.denominator for v in self.c), 1)
        ints = [int(v * den) for v in self.c]
        g = reduce(gcd, (abs(v) for v in ints), 0)
        if ints[-1] < 0:
            g = -g
        return LamPoly._raw(tuple(Fraction(v // g) for v in ints))

    def __repr__(self):
        return f"LamPoly({self.render()!r})"

    def render(self, var: str = "lam") -> str:
        if not self.c:
            return "0"
        parts = []
        for d in range(len(self.c) - 1, -1, -1):
            v = self.c[d]
            if not v:
                continue
            sign = "-" if v < 0 else "+"
            a = abs(v)
            if d == 0:
                body = _frac_str(a)
            else:
                mon = var if d == 1 else f"{var}^{d}"
                if a == 1:
                    body = mon
                elif a.denominator == 1:
                    body = f"{a.numerator}*{mon}"
                else:
                    body = f"({_frac_str(a)})*{mon}"
            parts.append((sign, body))
        s0, b0 = parts[0]
        out = ("-" if s0 == "-" else "") + b0
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out


def _frac_str(a: Fraction) -> str:
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def _int_primitive(c: Sequence[Fraction]) -> list:
    den = reduce(lambda a, b: a * b // gcd(a, b), (v.denominator for v in c), 1)
    ints = [int(v * den) for v in c]
    g = reduce(gcd, (abs(v) for v in ints), 0)
    return [v // g for v in ints]


def _int_prem(a: list, b: list) -> list:
    """Pseudo-remainder of integer polynomials (low degree first)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [v * lb for v in r]
        for j in range(db + 1):
            r[shift + j] -= lr * b[j]
        while r and r[-1] == 0:
            r.pop()
    return r


def poly_gcd(a: LamPoly, b: LamPoly) -> LamPoly:
    """Monic gcd over Q via a primitive polynomial remainder sequence."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_const() or b.is_const():
        return LamPoly._raw((_ONE,))
    # a linear argument divides the other or is coprime to it
    if len(b.c) == 2 or len(a.c) == 2:
        lin, other = (b, a) if len(b.c) == 2 else (a, b)
        return lin.monic() if other(-lin.c[0] / lin.c[1]) == 0 else LamPoly._raw((_ONE,))
    x = _int_primitive(a.c)
    y = _int_primitive(b.c)
    if len(x) < len(y):
        x, y = y, x
    while y:
        r = _int_prem(x, y)
        if not r:
            break
        if len(r) == 1:
            return LamPoly._raw((_ONE,))
        x, y = y, _int_primitive([Fraction(v) for v in r])
    return LamPoly([Fraction(v) for v in y]).monic()


class RatFunc:
    """Element of Q(lam) in canonical form: gcd(num, den) = 1, den monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        if not isinstance(num, LamPoly):
            num = LamPoly.const(num)
        if not isinstance(den, LamPoly):
            den = LamPoly.const(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        n, d = _normalize(num, den)
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _raw(cls, num: LamPoly, den: LamPoly) -> "RatFunc":
        r = object.__new__(cls)
        r.num = num
        r.den = den
        r._hash = None
        return r

    @classmethod
    def const(cls, v) -> "RatFunc":
        return cls._raw(LamPoly.const(v), _ONE_POLY)

    @classmethod
    def lam(cls) -> "RatFunc":
        return cls._raw(LamPoly.lam(), _ONE_POLY)

    @classmethod
    def poly(cls, coeffs) -> "RatFunc":
        return cls._raw(LamPoly(coeffs), _ONE_POLY)

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.c

    def __bool__(self):
        return bool(self.num.c)

    def is_const(self) -> bool:
        return len(self.num.c) <= 1 and len(self.den.c) == 1

    def is_poly(self) -> bool:
        return len(self.den.c) == 1

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"{self} is not constant")
        return self.num.const_value()

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num.c == other.num.c and self.den.c == other.den.c
        if isinstance(other, (int, Fraction)):
            return self.den.c == (_ONE,) and self.num == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("RatFunc", self.num.c, self.den.c))
        return self._hash

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other) -> "RatFunc":
        if not isinstance(other, RatFunc):
            other = _coerce(other)
        if not other.num.c:
            return self
        if not self.num.c:
            return other
        d1, d2 = self.den, other.den
        if d1.c == d2.c:
            if len(d1.c) == 1:
                return RatFunc._raw(self.num + other.num, _ONE_POLY)
            return RatFunc(self.num + other.num, d1)
        # both operands are canonical, so only the common part of the denominators can cancel
        if len(d1.c) == 1:
            return _nonzero_or_zero(self.num * d2 + other.num, d2)
        if len(d2.c) == 1:
            return _nonzero_or_zero(self.num + other.num * d1, d1)
        g = poly_gcd(d1, d2)
        if len(g.c) == 1:
            return _nonzero_or_zero(self.num * d2 + other.num * d1, d1 * d2)
        a, b = d1.divmod(g)[0], d2.divmod(g)[0]
        num = self.num * b + other.num * a
        if not num.c:
            return _ZERO_RF
        h = poly_gcd(num, g)
        if len(h.c) > 1:
            num, g = num.divmod(h)[0], g.divmod(h)[0]
        return RatFunc._raw(num, a * b * g)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        if not isinstance(other, RatFunc):
            other = _coerce(other)
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return _coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        if not isinstance(other, RatFunc):
            if isinstance(other, (int, Fraction)):
                return self.scale(Fraction(other))
            other = _coerce(other)
        if not self.num.c or not other.num.c:
            return _ZERO_RF
        sd, od = len(self.den.c) == 1, len(other.den.c) == 1
        if sd and od:
            return RatFunc._raw(self.num * other.num, _ONE_POLY)
        if len(other.num.c) == 1 and od:
            return RatFunc._raw(self.num.scale(other.num.c[0]), self.den)
        if len(self.num.c) == 1 and sd:
            return RatFunc._raw(other.num.scale(self.num.c[0]), other.den)
        # cross cancellation keeps the result canonical without a final gcd
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not od:
            g = poly_gcd(n1, d2)
            if len(g.c) > 1:
                n1, d2 = n1.divmod(g)[0], d2.divmod(g)[0]
        if not sd:
            g = poly_gcd(n2, d1)
            if len(g.c) > 1:
                n2, d1 = n2.divmod(g)[0], d1.divmod(g)[0]
        return RatFunc._raw(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def scale(self, s: Fraction) -> "RatFunc":
        if not s:
            return _ZERO_RF
        if s == 1:
            return self
        return RatFunc._raw(self.num.scale(s), self.den)

    def inverse(self) -> "RatFunc":
        if not self.num.c:
            raise DivisionByZero("inverse of the zero rational function")
        lc = self.num.lc()
        return RatFunc._raw(self.den.scale(1 / lc), self.num.scale(1 / lc))

    def __truediv__(self, other) -> "RatFunc":
        if not isinstance(other, RatFunc):
            other = _coerce(other)
        if not other.num.c:
            raise DivisionByZero("division by the zero rational function")
        if other.is_const():
            return self.scale(1 / other.num.c[0])
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return _coerce(other) / self

    def __pow__(self, e: int) -> "RatFunc":
        if e < 0:
            return self.inverse() ** (-e)
        out = _ONE_RF
        for _ in range(e):
            out = out * self
        return out

    def __call__(self, x):
        """Evaluate at a rational lam value."""
        d = self.den(x)
        if d == 0:
            raise DivisionByZero(f"denominator vanishes at lam={x}")
        return self.num(x) / d

    def shift(self, a) -> "RatFunc":
        """Return f(lam + a)."""
        if not a or (len(self.num.c) <= 1 and len(self.den.c) <= 1):
            return self
        return RatFunc(self.num.shift(a), self.den.shift(a))

    def __repr__(self):
        return f"RatFunc({self.render()!r})"

    def __str__(self):
        return self.render()

    def render(self, var: str = "lam") -> str:
        n = self.num.render(var)
        if len(self.den.c) == 1:
            return n
        return f"({n})/({self.den.render(var)})"

    def pretty(self) -> str:
        return self.render("λ")


def _nonzero_or_zero(num: LamPoly, den: LamPoly) -> "RatFunc":
    return RatFunc._raw(num, den) if num.c else _ZERO_RF


def _normalize(num: LamPoly, den: LamPoly):
    if num.is_zero():
        return num, _ONE_POLY
    if den.is_const():
        s = den.c[0]
        return (num.scale(1 / s) if s != 1 else num), _ONE_POLY
    g = poly_gcd(num, den)
    if not g.is_const():
        num = num.divmod(g)[0]
        den = den.divmod(g)[0]
    lc = den.lc()
    if lc != 1:
        num = num.scale(1 / lc)
        den = den.scale(1 / lc)
    return num, den


def _coerce(v) -> RatFunc:
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, LamPoly):
        return RatFunc._raw(v, _ONE_POLY)
    if isinstance(v, (int, Fraction)):
        return RatFunc.const(v)
    raise TypeError(f"cannot coerce {type(v).__name__} to RatFunc")


def rf(v) -> RatFunc:
    """Coerce ints, Fractions, strings like '3/2' and LamPolys to RatFunc."""
    if isinstance(v, str):
        return RatFunc.const(Fraction(v))
    return _coerce(v)


_ONE_POLY = LamPoly._raw((_ONE,))
_ZERO_RF = RatFunc._raw(LamPoly._raw(()), _ONE_POLY)
_ONE_RF = RatFunc._raw(_ONE_POLY, _ONE_POLY)
LAM = RatFunc.lam()
ZERO = _ZERO_RF
ONE = _ONE_RF

Scalar = Union[int, Fraction, RatFunc]


def rf_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# -- factorization ---------------------------------------------------------

def squarefree_decomposition(p: LamPoly) -> list:
    """Yun's algorithm: list of (squarefree monic factor, multiplicity)."""
    p = p.monic()
    if p.is_const():
        return []
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.divmod(a)[0]
    c = dp.divmod(a)[0]
    d = c - b.derivative()
    i = 1
    while not b.is_const():
        a = poly_gcd(b, d)
        if not a.is_const():
            out.append((a, i))
        b = b.divmod(a)[0]
        c = d.divmod(a)[0]
        d = c - b.derivative()
        i += 1
    return out


def _divisors(n: int) -> list:
    n = abs(n)
    out = []
    k = 1
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            if k * k != n:
                out.append(n // k)
        k += 1
    return out


def rational_roots(p: LamPoly) -> list:
    ints = _int_primitive(p.c)
    while ints and ints[0] == 0:
        ints = ints[1:]
    roots = [Fraction(0)] if len(ints) < len(_int_primitive(p.c)) else []
    if len(ints) <= 1:
        return roots
    q = LamPoly([Fraction(v) for v in ints])
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for s in (1, -1):
                r = Fraction(s * num, den)
                if r not in roots and q(r) == 0:
                    roots.append(r)
    return sorted(roots)


def factor_poly(p: LamPoly) -> list:
    """Factor over Q into primitive integer factors with multiplicities.

    Linear factors are split off via rational roots; the remaining squarefree
    cofactor of each multiplicity class is reported as one factor (it has no
    rational roots; for degree <= 3 it is irreducible).
    """
    out = []
    for f, m in squarefree_decomposition(p):
        rest = f
        for r in rational_roots(f):
            lin = LamPoly((-r, 1))
            rest = rest.divmod(lin)[0]
            out.append((lin.primitive(), m))
        if not rest.is_const():
            out.append((rest.primitive(), m))
    out.sort(key=lambda fm: (fm[0].degree, [abs(v) for v in fm[0].c], fm[0].c))
    return out


def rf_factor_denominator(a: RatFunc) -> list:
    if a.is_zero():
        raise ValueError("rf_factor_denominator requires a nonzero rational function")
    return factor_poly(a.den)


def render_factored(a: RatFunc, var: str = "lam") -> str:
    """Render as c * prod(factors) / prod(factors), e.g. -3*(lam + 1)*(2*lam + 1)/(...)."""
    if a.is_zero():
        return "0"

    def side(p: LamPoly):
        fs = factor_poly(p) if not p.is_const() else []
        prod = LamPoly.const(1)
        parts = []
        for f, m in fs:
            prod = prod * (f ** m)
            body = f.render(var)
            if f.degree >= 1 and len(f.c) - sum(1 for v in f.c if not v) > 1:
                body = f"({body})"
            parts.append(body if m == 1 else f"{body}^{m}")
        c = p.lc() / prod.lc() if fs else p.const_value()
        return c, parts

    cn, pn = side(a.num)
    cd, pd = side(a.den)
    c = cn / cd
    num = "*".join(pn)
    if c == 1 and num:
        head = num
    elif c == -1 and num:
        head = "-" + num
    else:
        head = _frac_str(c) if not num else f"{_frac_str(c)}*{num}"
        if c.denominator != 1 and num:
            head = f"{c.numerator}*{num}"
            pd = [str(c.denominator)] + pd
    if not pd:
        return head
    den = "*".join(pd)
    return f"{head}/({den})" if len(pd) > 1 else f"{head}/{den}"
