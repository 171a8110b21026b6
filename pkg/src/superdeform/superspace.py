"""Superpolynomials F = f0(x) + th*f1(x) on the superline and the odd derivations."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Optional

from .scalars import RatFunc, rf, ZERO

EVEN, ODD = 0, 1


class NonHomogeneous(ValueError):
    pass


def _clean(d: Dict[int, RatFunc]) -> Dict[int, RatFunc]:
    return {k: v for k, v in d.items() if not v.is_zero()}


def _poly_str(d: Dict[int, RatFunc]) -> str:
    if not d:
        return "0"
    parts = []
    for e in sorted(d, reverse=True):
        c = d[e]
        mon = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
        if c.is_const():
            v = c.const_value()
            neg = v < 0
            a = -v if neg else v
            if mon and a == 1:
                body = mon
            else:
                cs = str(a.numerator) if a.denominator == 1 else f"({a.numerator}/{a.denominator})"
                body = cs if not mon else f"{cs}*{mon}"
        else:
            neg = False
            body = f"({c.render()})" + (f"*{mon}" if mon else "")
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


class SuperPoly:
    """F = f0 + th*f1 with f0, f1 polynomials in x over Q(lam).

    ``parity`` is 0, 1 or None (mixed).  It is declared, not inferred: an
    even value must have f1 = 0 and an odd value must have f0 = 0.
    """

    __slots__ = ("f0", "f1", "parity")

    def __init__(self, f0=None, f1=None, parity: Optional[int] = None):
        self.f0 = _clean({int(k): rf(v) for k, v in (f0 or {}).items()})
        self.f1 = _clean({int(k): rf(v) for k, v in (f1 or {}).items()})
        if parity is None:
            if not self.f1:
                parity = EVEN
            elif not self.f0:
                parity = ODD
        elif parity == EVEN and self.f1:
            raise NonHomogeneous("even SuperPoly with a theta part")
        elif parity == ODD and self.f0:
            raise NonHomogeneous("odd SuperPoly with a theta-free part")
        self.parity = parity

    @classmethod
    def even(cls, f0) -> "SuperPoly":
        return cls(f0, None, EVEN)

    @classmethod
    def odd(cls, f1) -> "SuperPoly":
        return cls(None, f1, ODD)

    @classmethod
    def monomial(cls, parity: int, n: int, c=1) -> "SuperPoly":
        """x^n (parity 0) or th*x^n (parity 1)."""
        return cls.even({n: c}) if parity == EVEN else cls.odd({n: c})

    @classmethod
    def zero(cls, parity: Optional[int] = EVEN) -> "SuperPoly":
        return cls(None, None, parity)

    def is_zero(self) -> bool:
        return not self.f0 and not self.f1

    def is_homogeneous(self) -> bool:
        return self.parity is not None

    def require_homogeneous(self) -> int:
        if self.parity is None:
            raise NonHomogeneous(f"mixed-parity SuperPoly {self}")
        return self.parity

    def xpart(self) -> Dict[int, RatFunc]:
        """The x-polynomial carried by a homogeneous value (f0 if even, f1 if odd)."""
        return self.f0 if self.require_homogeneous() == EVEN else self.f1

    def degree(self) -> int:
        ks = list(self.f0) + list(self.f1)
        return max(ks) if ks else -1

    def __eq__(self, other):
        if not isinstance(other, SuperPoly):
            return NotImplemented
        return self.f0 == other.f0 and self.f1 == other.f1

    def __hash__(self):
        return hash((tuple(sorted(self.f0.items())), tuple(sorted(self.f1.items()))))

    def __add__(self, other: "SuperPoly") -> "SuperPoly":
        f0 = dict(self.f0)
        for k, v in other.f0.items():
            f0[k] = f0.get(k, ZERO) + v
        f1 = dict(self.f1)
        for k, v in other.f1.items():
            f1[k] = f1.get(k, ZERO) + v
        out = SuperPoly(f0, f1)
        if self.parity is not None and self.parity == other.parity:
            out.parity = self.parity
        elif self.is_zero() and out.is_zero():
            out.parity = other.parity
        return out

    def __neg__(self) -> "SuperPoly":
        return SuperPoly({k: -v for k, v in self.f0.items()},
                         {k: -v for k, v in self.f1.items()}, self.parity)

    def __sub__(self, other: "SuperPoly") -> "SuperPoly":
        return self + (-other)

    def scale(self, c) -> "SuperPoly":
        c = rf(c)
        return SuperPoly({k: c * v for k, v in self.f0.items()},
                         {k: c * v for k, v in self.f1.items()}, self.parity)

    def __mul__(self, other: "SuperPoly") -> "SuperPoly":
        # (a0 + th a1)(b0 + th b1) = a0 b0 + th (a1 b0 + a0 b1); coefficients are even.
        if not isinstance(other, SuperPoly):
            return self.scale(other)
        a00 = _pmul(self.f0, other.f0)
        a1 = _padd(_pmul(self.f1, other.f0), _pmul(self.f0, other.f1))
        par = None
        if self.parity is not None and other.parity is not None:
            par = (self.parity + other.parity) % 2
        return SuperPoly(a00, a1, par)

    def evaluate_lam(self, lam0) -> "SuperPoly":
        return SuperPoly({k: rf(v(lam0)) for k, v in self.f0.items()},
                         {k: rf(v(lam0)) for k, v in self.f1.items()}, self.parity)

    def render(self) -> str:
        if self.is_zero():
            return "0"
        out = []
        if self.f0:
            out.append(_poly_str(self.f0))
        if self.f1:
            body = _poly_str(self.f1)
            if len(self.f1) > 1:
                body = f"({body})"
            out.append("th" if body == "1" else "-th" if body == "-1" else f"th*{body}")
        s = out[0]
        for t in out[1:]:
            s += f" + {t}"
        return s

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"SuperPoly({self.render()!r}, parity={self.parity})"


def _padd(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, ZERO) + v
    return _clean(out)


def _pmul(a, b):
    out: Dict[int, RatFunc] = {}
    for i, u in a.items():
        for j, v in b.items():
            out[i + j] = out.get(i + j, ZERO) + u * v
    return _clean(out)


def _pder(a):
    return {k - 1: v.scale(Fraction(k)) for k, v in a.items() if k}


def d_x(F: SuperPoly) -> SuperPoly:
    return SuperPoly(_pder(F.f0), _pder(F.f1), F.parity)


def eta_bar(F: SuperPoly) -> SuperPoly:
    """(d/dth - th d/dx)(f0 + th f1) = f1 - th f0'."""
    p = F.require_homogeneous()
    return SuperPoly(F.f1, {k: -v for k, v in _pder(F.f0).items()}, 1 - p)


def eta(F: SuperPoly) -> SuperPoly:
    """(d/dth + th d/dx)(f0 + th f1) = f1 + th f0'."""
    p = F.require_homogeneous()
    return SuperPoly(F.f1, _pder(F.f0), 1 - p)


def eta_bar_pow(F: SuperPoly, i: int) -> SuperPoly:
    if i < 0:
        raise ValueError("negative power of eta_bar")
    out = F
    for _ in range(i):
        out = eta_bar(out)
    return out


def random_superpoly(rng: random.Random, parity: int, degree: int, lam: bool = False) -> SuperPoly:
    """Random homogeneous SuperPoly with small rational (optionally lam-linear) coefficients."""
    d = {}
    for k in range(degree + 1):
        if rng.random() < 0.7:
            c = RatFunc.const(Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
            if lam and rng.random() < 0.3:
                c = c + RatFunc.lam().scale(Fraction(rng.randint(-3, 3)))
            d[k] = c
    return SuperPoly.even(d) if parity == EVEN else SuperPoly.odd(d)
