"""Deformation parameters, supercommutative parameter polynomials and relation ideals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .densities import Weight
from .scalars import ONE, ZERO, RatFunc, rf


@dataclass(frozen=True)
class ParamName:
    src: Weight
    dst: Weight
    variant: str = "plain"  # "plain" or "tilde"

    def __post_init__(self):
        d = self.dst - self.src
        if d.lam_coeff != 0 or d.offset < 0:
            raise ValueError(f"parameter {self.src}->{self.dst} has no admissible shift")
        if self.variant not in ("plain", "tilde"):
            raise ValueError(f"unknown parameter variant {self.variant!r}")

    @property
    def shift(self) -> Fraction:
        return (self.dst - self.src).offset

    @property
    def parity(self) -> int:
        return int(2 * self.shift) % 2

    def sort_key(self):
        # outer operators first: larger source, then larger target
        return (-self.src.lam_coeff, -self.src.offset, -self.dst.offset, self.variant)

    def shift_lam(self, a) -> "ParamName":
        a = Fraction(a)
        return ParamName(self.src + a * self.src.lam_coeff, self.dst + a * self.dst.lam_coeff, self.variant)

    def render(self) -> str:
        head = "tt" if self.variant == "tilde" else "t"
        return f"{head}[{self.src.render()}->{self.dst.render()}]"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return self.render()


Monomial = Tuple[ParamName, ...]


def normalize_monomial(factors: Sequence[ParamName]) -> Tuple[int, Monomial]:
    """Sort factors into canonical order; returns (sign, monomial), sign 0 if an odd factor repeats."""
    fs = list(factors)
    sign = 1
    # insertion sort, counting transpositions of odd neighbours
    for i in range(1, len(fs)):
        j = i
        while j > 0 and fs[j].sort_key() < fs[j - 1].sort_key():
            if fs[j].parity and fs[j - 1].parity:
                sign = -sign
            fs[j], fs[j - 1] = fs[j - 1], fs[j]
            j -= 1
    for a, b in zip(fs, fs[1:]):
        if a == b and a.parity:
            return 0, tuple(fs)
    return sign, tuple(fs)


def monomial_parity(m: Monomial) -> int:
    return sum(p.parity for p in m) % 2


def render_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        parts.append(m[i].render() + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return "*".join(parts)


class ParamPoly:
    """Finite sum of coeff * monomial with coefficients in Q(lam)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Monomial, RatFunc]] = None):
        self.terms: Dict[Monomial, RatFunc] = {}
        if terms:
            for m, c in terms.items():
                self._add(m, rf(c))

    def _add(self, m: Monomial, c: RatFunc, sign: int = 1):
        if sign == 0 or c.is_zero():
            return
        if sign == -1:
            c = -c
        v = self.terms.get(m)
        v = c if v is None else v + c
        if v.is_zero():
            self.terms.pop(m, None)
        else:
            self.terms[m] = v

    @classmethod
    def const(cls, c) -> "ParamPoly":
        return cls({(): rf(c)})

    @classmethod
    def param(cls, p: ParamName, c=1) -> "ParamPoly":
        return cls({(p,): rf(c)})

    @classmethod
    def monomial(cls, factors: Sequence[ParamName], c=1) -> "ParamPoly":
        s, m = normalize_monomial(factors)
        out = cls()
        out._add(m, rf(c), s)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({len(m) for m in self.terms}) <= 1

    def parity(self) -> Optional[int]:
        ps = {monomial_parity(m) for m in self.terms}
        return ps.pop() if len(ps) == 1 else (0 if not ps else None)

    def params(self) -> List[ParamName]:
        return sorted({p for m in self.terms for p in m}, key=ParamName.sort_key)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0]))

    def coeff(self, m: Monomial) -> RatFunc:
        return self.terms.get(m, ZERO)

    def __add__(self, other: "ParamPoly") -> "ParamPoly":
        out = ParamPoly()
        out.terms = dict(self.terms)
        for m, c in other.terms.items():
            out._add(m, c)
        return out

    def __neg__(self) -> "ParamPoly":
        return self.scale(-1)

    def __sub__(self, other: "ParamPoly") -> "ParamPoly":
        return self + (-other)

    def scale(self, c) -> "ParamPoly":
        c = rf(c)
        out = ParamPoly()
        if c.is_zero():
            return out
        out.terms = {m: v * c for m, v in self.terms.items()}
        return out

    def __mul__(self, other: "ParamPoly") -> "ParamPoly":
        out = ParamPoly()
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                s, m = normalize_monomial(m1 + m2)
                out._add(m, c1 * c2, s)
        return out

    def shift_lam(self, a) -> "ParamPoly":
        out = ParamPoly()
        for m, c in self.terms.items():
            s, mm = normalize_monomial([p.shift_lam(a) for p in m])
            out._add(mm, c.shift(a), s)
        return out

    def __eq__(self, other):
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.items()))

    def leading(self) -> Tuple[Monomial, RatFunc]:
        m = min(self.terms, key=_mono_key)
        return m, self.terms[m]

    def monic(self) -> "ParamPoly":
        if self.is_zero():
            return self
        return self.scale(ONE / self.leading()[1])

    def render(self, var: str = "lam") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for m, c in self.items():
            mon = render_monomial(m)
            if c == ONE:
                s = mon
            elif c == -ONE:
                s = "-" + mon
            else:
                cs = c.render(var)
                if c.is_const() and c.const_value().denominator == 1:
                    s = f"{cs}*{mon}"
                else:
                    s = f"({cs})*{mon}"
                if not m:
                    s = cs
            parts.append(s)
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"ParamPoly({self.render()})"


def _mono_key(m: Monomial):
    return (len(m), [p.sort_key() for p in m])


def param_mul(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    return a * b


# -- ideals -----------------------------------------------------------------------

@dataclass
class Provenance:
    order: int
    shift: Fraction
    window: str
    block: str = ""
    note: str = ""

    def as_dict(self) -> dict:
        s = self.shift
        d = {"order": self.order, "shift": str(s.numerator) if s.denominator == 1 else f"{s.numerator}/{s.denominator}",
             "window": self.window}
        if self.block:
            d["block"] = self.block
        if self.note:
            d["note"] = self.note
        return d


def _grade(m: Monomial):
    """(degree, net weight transport): every relation is homogeneous for this grading."""
    vec: Dict[Weight, int] = {}
    for p in m:
        if p.src != p.dst:
            vec[p.dst] = vec.get(p.dst, 0) + 1
            vec[p.src] = vec.get(p.src, 0) - 1
    return (len(m), tuple(sorted((w, n) for w, n in vec.items() if n)))


def _add_vec(a, b, sign=1):
    d = dict(a)
    for w, n in b:
        d[w] = d.get(w, 0) + sign * n
    return tuple(sorted((w, n) for w, n in d.items() if n))


@dataclass
class RelationIdeal:
    generators: List[ParamPoly] = field(default_factory=list)
    provenance: List[Provenance] = field(default_factory=list)
    universe: List[ParamName] = field(default_factory=list)

    def __post_init__(self):
        self._components: Dict[tuple, Dict[Monomial, ParamPoly]] = {}

    def add(self, g: ParamPoly, prov: Provenance) -> bool:
        """Append a generator unless it already lies in the ideal; returns True if added."""
        if g.is_zero() or self.contains(g):
            return False
        self.generators.append(g)
        self.provenance.append(prov)
        for p in g.params():
            if p not in self.universe:
                self.universe.append(p)
        self._components.clear()
        return True

    def __len__(self):
        return len(self.generators)

    # degree-wise linear algebra: the ideal is homogeneous for _grade, so its component
    # of a given grade is spanned by monomial multiples of generators of that grade.
    def _component(self, grade) -> Dict[Monomial, ParamPoly]:
        if grade in self._components:
            return self._components[grade]
        deg, vec = grade
        by_vec: Dict[tuple, List[ParamName]] = {}
        for p in self.universe:
            by_vec.setdefault(_grade((p,))[1], []).append(p)
        basis: Dict[Monomial, ParamPoly] = {}
        for g in self.generators:
            gdeg = g.degree()
            if gdeg > deg or not g.is_homogeneous():
                continue
            gvec = _grade(next(iter(g.terms)))[1]
            need = _add_vec(vec, gvec, -1)
            for mult in _multipliers(by_vec, deg - gdeg, need):
                prod = ParamPoly.monomial(mult) * g
                _insert(basis, prod)
        self._components[grade] = basis
        return basis

    def reduce(self, p: ParamPoly) -> ParamPoly:
        out = ParamPoly()
        groups: Dict[tuple, ParamPoly] = {}
        for m, c in p.terms.items():
            groups.setdefault(_grade(m), ParamPoly())._add(m, c)
        # multipliers must range over every parameter that can occur in p
        fresh = [x for x in p.params() if x not in self.universe]
        if fresh:
            self.universe.extend(fresh)
            self._components.clear()
        for grade, q in sorted(groups.items(), key=lambda kv: (kv[0][0], repr(kv[0][1]))):
            out = out + _reduce_by(self._component(grade), q)
        return out

    def contains(self, p: ParamPoly) -> bool:
        return self.reduce(p).is_zero()

    def as_json(self) -> dict:
        return {"generators": [dict(poly=g.render(), **pr.as_dict())
                               for g, pr in zip(self.generators, self.provenance)]}


def _multipliers(by_vec, k: int, need) -> Iterable[Tuple[ParamName, ...]]:
    if k == 0:
        if not need:
            yield ()
        return
    keys = list(by_vec)

    def rec(k, need, start):
        if k == 0:
            if not need:
                yield ()
            return
        for i in range(start, len(keys)):
            v = keys[i]
            rest = _add_vec(need, v, -1)
            for j, p in enumerate(by_vec[v]):
                for tail in rec(k - 1, rest, i):
                    yield (p,) + tail
    seen = set()
    for combo in rec(k, need, 0):
        key = tuple(sorted(combo, key=ParamName.sort_key))
        if key not in seen:
            seen.add(key)
            yield key


def _reduce_by(basis: Dict[Monomial, ParamPoly], p: ParamPoly) -> ParamPoly:
    p = ParamPoly(dict(p.terms))
    changed = True
    while changed and not p.is_zero():
        changed = False
        for m in sorted(p.terms, key=_mono_key):
            if m in basis:
                c = p.terms[m]
                p = p - basis[m].scale(c)
                changed = True
                break
    return p


def _insert(basis: Dict[Monomial, ParamPoly], q: ParamPoly) -> None:
    """Add q to an echelon basis keyed by leading monomial (each basis element monic)."""
    q = _reduce_by(basis, q)
    if q.is_zero():
        return
    lm, lc = q.leading()
    q = q.scale(ONE / lc)
    # keep the basis fully reduced on leading monomials
    for m in list(basis):
        c = basis[m].coeff(lm)
        if not c.is_zero():
            basis[m] = basis[m] - q.scale(c)
    basis[lm] = q


def reduce_mod_ideal(p: ParamPoly, R: RelationIdeal) -> ParamPoly:
    return R.reduce(p)


def span_equal(a: Sequence[ParamPoly], b: Sequence[ParamPoly]) -> bool:
    """Do two lists of polynomials span the same Q(lam)-vector space?"""
    ba: Dict[Monomial, ParamPoly] = {}
    for q in a:
        _insert(ba, q)
    bb: Dict[Monomial, ParamPoly] = {}
    for q in b:
        _insert(bb, q)
    if len(ba) != len(bb):
        return False
    return all(_reduce_by(ba, q).is_zero() for q in b)


def echelon(polys: Sequence[ParamPoly]) -> List[ParamPoly]:
    """Canonical reduced echelon basis of the span (sorted by leading monomial)."""
    basis: Dict[Monomial, ParamPoly] = {}
    for q in polys:
        _insert(basis, q)
    return [basis[m] for m in sorted(basis, key=_mono_key)]
