"""Weight-homogeneous multilinear local operators on densities.

Internal normal form
--------------------
An input of parity p is X = x(x) (p = 0) or X = th*x(x) (p = 1); call x its
x-part.  In a fixed parity sector, every constant-coefficient monomial
etabar^{e_1}(X_1) ... etabar^{e_r}(X_r) equals +-th^eps * prod_s D^{d_s} x_s,
where eps is the output parity.  We store operators in this *value form*:

    terms[pars][ds] = c     meaning     c * th^eps * prod_s D^{d_s}(x_s)

with ``pars`` the tuple of input parities and ``ds`` the derivative orders.
Value form is unique (the etabar form is not: e.g. etabar(X) etabar^2(Y) and
etabar^2(X) etabar(Y) agree on even inputs), and composing operators in it is
a plain Leibniz expansion with no Koszul signs.  The etabar presentation used
for display and JSON is derived from it: the value term above equals
(-1)^{sum ds} times the etabar monomial whose th-carrier is chosen canonically.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .densities import ADJOINT, Weight
from .scalars import ONE, ZERO, RatFunc, rf
from .superspace import EVEN, ODD, SuperPoly, NonHomogeneous

HALF = Fraction(1, 2)

Sector = Tuple[int, ...]
Ds = Tuple[int, ...]


class HomogeneityError(ValueError):
    pass


class WeightMismatch(ValueError):
    pass


def total_order(ins: Sequence[Weight], out: Weight) -> int:
    """N = 2(out - sum ins): the total number of etabar's in every term."""
    diff = out
    for w in ins:
        diff = diff - w
    if diff.lam_coeff != 0 or (2 * diff.offset).denominator != 1 or diff.offset < 0:
        raise HomogeneityError(f"weights {[str(w) for w in ins]} -> {out} admit no local operator")
    return int(2 * diff.offset)


def sector_dsum(pars: Sector, parity: int, N: int) -> Optional[int]:
    """Sum of derivative orders forced by homogeneity in a sector (None if empty)."""
    eps = (parity + sum(pars)) % 2
    twice = N - sum(pars) + eps
    if twice < 0 or twice % 2:
        return None
    return twice // 2


def compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for a in range(n + 1):
        for rest in compositions(n - a, k - 1):
            yield (a,) + rest


def eta_to_value(pars: Sector, exps: Sequence[int]):
    """Rewrite etabar^{e_1}(X_1)...etabar^{e_r}(X_r) in a sector as (sign, eps, ds), or None if it vanishes."""
    sign = 1
    theta = 0
    ds = []
    for p, e in zip(pars, exps):
        m, odd_e = divmod(e, 2)
        if p == EVEN:
            if odd_e:
                theta += 1
                ds.append(m + 1)
                sign *= (-1) ** (m + 1)
            else:
                ds.append(m)
                sign *= (-1) ** m
        else:
            if odd_e:
                ds.append(m)
                sign *= (-1) ** m
            else:
                theta += 1
                ds.append(m)
                sign *= (-1) ** m
    if theta > 1:
        return None
    return sign, theta, tuple(ds)


def value_to_eta(pars: Sector, eps: int, ds: Ds) -> Tuple[int, Tuple[int, ...]]:
    """Canonical etabar monomial for a value term: (sign, exps) with value = sign * monomial."""
    carrier = None
    if eps:
        for s, p in enumerate(pars):
            if p == ODD:
                carrier = s
                break
        if carrier is None:
            for s, d in enumerate(ds):
                if d >= 1:
                    carrier = s
                    break
    exps = []
    for s, (p, d) in enumerate(zip(pars, ds)):
        if s == carrier:
            exps.append(2 * d - 1 if p == EVEN else 2 * d)
        else:
            exps.append(2 * d if p == EVEN else 2 * d + 1)
    return (-1) ** sum(ds), tuple(exps)


class MultiOp:
    """Multilinear constant-coefficient operator F_{ins[0]} x ... -> F_out in value form."""

    __slots__ = ("ins", "out", "parity", "N", "terms")

    def __init__(self, ins: Sequence[Weight], out: Weight, terms=None, parity: Optional[int] = None):
        self.ins = tuple(ins)
        self.out = out
        self.N = total_order(self.ins, out)
        if parity is None:
            parity = self.N % 2
        if parity != self.N % 2:
            raise HomogeneityError(f"operator parity {parity} inconsistent with order {self.N}")
        self.parity = parity
        self.terms: Dict[Sector, Dict[Ds, RatFunc]] = {}
        if terms:
            for (pars, ds), c in terms.items():
                self.add_term(pars, ds, c)

    # -- construction ------------------------------------------------------
    @property
    def arity(self) -> int:
        return len(self.ins)

    def sectors(self) -> List[Sector]:
        return list(itertools.product((0, 1), repeat=self.arity))

    def add_term(self, pars: Sector, ds: Ds, c) -> None:
        c = rf(c)
        if c.is_zero():
            return
        pars, ds = tuple(pars), tuple(ds)
        if len(pars) != self.arity or len(ds) != self.arity:
            raise HomogeneityError("term arity mismatch")
        want = sector_dsum(pars, self.parity, self.N)
        if want is None or sum(ds) != want or min(ds) < 0:
            raise HomogeneityError(f"term {pars}/{ds} violates homogeneity (order {self.N})")
        sec = self.terms.setdefault(pars, {})
        v = sec.get(ds)
        v = c if v is None else v + c
        if v.is_zero():
            del sec[ds]
            if not sec:
                del self.terms[pars]
        else:
            sec[ds] = v

    def add_eta_term(self, pars: Sector, exps: Sequence[int], c) -> None:
        if sum(exps) != self.N:
            raise HomogeneityError(f"etabar exponents {tuple(exps)} do not sum to {self.N}")
        conv = eta_to_value(tuple(pars), exps)
        if conv is None:
            return
        sign, eps, ds = conv
        if eps != (self.parity + sum(pars)) % 2:
            raise HomogeneityError("etabar term has wrong output parity")
        self.add_term(pars, ds, rf(c).scale(Fraction(sign)))

    @classmethod
    def from_eta(cls, ins, out, eta_terms: Iterable, parity: Optional[int] = None) -> "MultiOp":
        """Build from (exps, coeff_fn) pairs; coeff_fn(pars) gives the sector-dependent coefficient."""
        op = cls(ins, out, parity=parity)
        for exps, cf in eta_terms:
            for pars in op.sectors():
                c = cf if isinstance(cf, (int, Fraction, RatFunc)) else cf(pars)
                if c:
                    op.add_eta_term(pars, exps, c)
        return op

    def basis_terms(self) -> List[Tuple[Sector, Ds]]:
        """All admissible (sector, ds) keys, i.e. a basis of the operator space."""
        out = []
        for pars in self.sectors():
            D = sector_dsum(pars, self.parity, self.N)
            if D is None:
                continue
            for ds in compositions(D, self.arity):
                out.append((pars, ds))
        return out

    def copy_empty(self) -> "MultiOp":
        return MultiOp(self.ins, self.out, parity=self.parity)

    # -- queries -----------------------------------------------------------
    def items(self):
        for pars in sorted(self.terms):
            sec = self.terms[pars]
            for ds in sorted(sec):
                yield (pars, ds), sec[ds]

    def coeff(self, pars: Sector, ds: Ds) -> RatFunc:
        return self.terms.get(tuple(pars), {}).get(tuple(ds), ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def nterms(self) -> int:
        return sum(len(v) for v in self.terms.values())

    def shift(self) -> Fraction:
        """out - last input weight (the k of D_{lam, lam+k})."""
        d = self.out - self.ins[-1]
        return d.offset

    def same_space(self, other: "MultiOp") -> bool:
        return self.ins == other.ins and self.out == other.out and self.parity == other.parity

    def __eq__(self, other):
        if not isinstance(other, MultiOp):
            return NotImplemented
        return self.same_space(other) and self.terms == other.terms

    def __hash__(self):
        return hash((self.ins, self.out, self.parity, tuple(self.items())))

    # -- linear structure --------------------------------------------------
    def _check(self, other: "MultiOp"):
        if not self.same_space(other):
            raise WeightMismatch(f"cannot combine operators on different spaces: "
                                 f"{self.signature()} vs {other.signature()}")

    def __add__(self, other: "MultiOp") -> "MultiOp":
        self._check(other)
        out = self.copy_empty()
        for (p, d), c in self.items():
            out.add_term(p, d, c)
        for (p, d), c in other.items():
            out.add_term(p, d, c)
        return out

    def __neg__(self) -> "MultiOp":
        return self.scale(-1)

    def __sub__(self, other: "MultiOp") -> "MultiOp":
        return self + (-other)

    def scale(self, c) -> "MultiOp":
        c = rf(c)
        out = self.copy_empty()
        if c.is_zero():
            return out
        for pars, sec in self.terms.items():
            out.terms[pars] = {d: v * c for d, v in sec.items()}
        return out

    def scale_sectors(self, fn: Callable[[Sector], int]) -> "MultiOp":
        out = self.copy_empty()
        for pars, sec in self.terms.items():
            s = fn(pars)
            if s:
                out.terms[pars] = {d: v.scale(Fraction(s)) for d, v in sec.items()}
        return out

    def map_coeffs(self, fn: Callable[[RatFunc], RatFunc]) -> "MultiOp":
        out = self.copy_empty()
        for (p, d), c in self.items():
            out.add_term(p, d, fn(c))
        return out

    def shift_lam(self, a) -> "MultiOp":
        """Substitute lam -> lam + a in weights and coefficients."""
        a = Fraction(a)
        ins = [w + a * w.lam_coeff for w in self.ins]
        out = MultiOp(ins, self.out + a * self.out.lam_coeff, parity=self.parity)
        for pars, sec in self.terms.items():
            out.terms[pars] = {d: v.shift(a) for d, v in sec.items()}
        return out

    def specialize(self, lam0) -> "MultiOp":
        lam0 = Fraction(lam0)
        out = MultiOp([w.specialize(lam0) for w in self.ins], self.out.specialize(lam0), parity=self.parity)
        for (p, d), c in self.items():
            out.add_term(p, d, RatFunc.const(c(lam0)))
        return out

    # -- evaluation --------------------------------------------------------
    def apply(self, *inputs: SuperPoly) -> SuperPoly:
        if len(inputs) != self.arity:
            raise ValueError(f"expected {self.arity} inputs")
        pars = tuple(X.require_homogeneous() for X in inputs)
        eps = (self.parity + sum(pars)) % 2
        xs = [X.xpart() for X in inputs]
        acc: Dict[int, RatFunc] = {}
        for ds, c in self.terms.get(pars, {}).items():
            prod = {0: c}
            for x, d in zip(xs, ds):
                der = _pderiv(x, d)
                if not der:
                    prod = {}
                    break
                prod = _pmul(prod, der)
            for k, v in prod.items():
                acc[k] = acc.get(k, ZERO) + v
        acc = {k: v for k, v in acc.items() if not v.is_zero()}
        return SuperPoly(acc, None, EVEN) if eps == EVEN else SuperPoly(None, acc, ODD)

    __call__ = apply

    @classmethod
    def reconstruct(cls, func: Callable[..., SuperPoly], ins, out, parity: Optional[int] = None,
                    check_extra: int = 0) -> "MultiOp":
        """Recover an operator from its values on monomials x^m / th*x^m.

        For ds with sum D, evaluating at m = ds isolates the coefficient (the
        falling factorials of every other admissible ds vanish).  ``check_extra``
        re-evaluates at degrees up to D + check_extra and raises if the
        reconstructed operator disagrees.
        """
        op = cls(ins, out, parity=parity)
        for pars, ds in op.basis_terms():
            inputs = [SuperPoly.monomial(p, d) for p, d in zip(pars, ds)]
            val = func(*inputs)
            x = val.f1 if (op.parity + sum(pars)) % 2 else val.f0
            c = x.get(0, ZERO)
            denom = 1
            for d in ds:
                denom *= factorial(d)
            op.add_term(pars, ds, c.scale(Fraction(1, denom)))
        if check_extra:
            for pars in op.sectors():
                D = sector_dsum(pars, op.parity, op.N)
                if D is None:
                    continue
                for tot in range(D, D + check_extra + 1):
                    for ms in compositions(tot, op.arity):
                        inputs = [SuperPoly.monomial(p, m) for p, m in zip(pars, ms)]
                        if func(*inputs) != op.apply(*inputs):
                            raise HomogeneityError(f"reconstruction mismatch at {pars}/{ms}")
        return op

    # -- presentation ------------------------------------------------------
    def eta_terms(self) -> List[Tuple[Sector, Tuple[int, ...], RatFunc]]:
        out = []
        for (pars, ds), c in self.items():
            eps = (self.parity + sum(pars)) % 2
            sign, exps = value_to_eta(pars, eps, ds)
            out.append((pars, exps, c.scale(Fraction(sign))))
        return out

    def signature(self) -> str:
        return f"({', '.join(str(w) for w in self.ins)}) -> {self.out} [parity {self.parity}]"

    def to_json(self) -> dict:
        terms = []
        for pars, exps, c in self.eta_terms():
            t = {}
            for s, e in enumerate(exps):
                t["ijl"[s] if self.arity <= 3 else f"e{s}"] = e
            for s, p in enumerate(pars):
                t[f"p{s + 1}"] = p
            t["c"] = c.render()
            terms.append(t)
        return {"ins": [str(w) for w in self.ins], "out": str(self.out),
                "shift": _frac(self.shift()), "parity": self.parity, "terms": terms}

    def render(self, names: Sequence[str] = ("G", "H", "F")) -> str:
        if self.is_zero():
            return "0"
        names = list(names)[-self.arity:] if self.arity < len(names) else list(names)
        if self.arity == 2:
            names = ["G", "F"]
        if self.arity == 1:
            names = ["F"]
        lines = []
        for pars, exps, c in self.eta_terms():
            mon = "*".join(f"eb^{e}({n})" if e else n for e, n in zip(exps, names))
            sec = ",".join(f"p({n})={p}" for n, p in zip(names, pars))
            lines.append(f"[{sec}] ({c.render()}) {mon}")
        return "\n".join(lines)

    def __repr__(self):
        return f"MultiOp{self.signature()} with {self.nterms()} terms"


LinOp = MultiOp
BilinOp = MultiOp
TriOp = MultiOp


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _pderiv(x: Dict[int, RatFunc], d: int) -> Dict[int, RatFunc]:
    if d == 0:
        return x
    out = {}
    for k, v in x.items():
        if k >= d:
            f = 1
            for t in range(k - d + 1, k + 1):
                f *= t
            out[k - d] = v.scale(Fraction(f))
    return out


def _pmul(a, b):
    out: Dict[int, RatFunc] = {}
    for i, u in a.items():
        for j, v in b.items():
            w = u * v
            out[i + j] = out.get(i + j, ZERO) + w
    return out


# -- composition ----------------------------------------------------------

_DERIV_CACHE: Dict[tuple, Dict[Ds, int]] = {}


def _derive_monomial(ds: Ds, n: int) -> Dict[Ds, int]:
    """D^n of prod_t x_t^{(d_t)} as integer combination of monomials."""
    key = (ds, n)
    hit = _DERIV_CACHE.get(key)
    if hit is not None:
        return hit
    out = {}
    fn = factorial(n)
    for comp in compositions(n, len(ds)):
        mult = fn
        for c in comp:
            mult //= factorial(c)
        out[tuple(a + b for a, b in zip(ds, comp))] = mult
    _DERIV_CACHE[key] = out
    return out


def _derive_poly(poly: Dict[Ds, RatFunc], n: int) -> Dict[Ds, RatFunc]:
    if n == 0:
        return poly
    acc: Dict[Ds, RatFunc] = {}
    for ds, c in poly.items():
        for nds, m in _derive_monomial(ds, n).items():
            v = c.scale(Fraction(m))
            w = acc.get(nds)
            acc[nds] = v if w is None else w + v
    return {k: v for k, v in acc.items() if not v.is_zero()}


IDENTITY = None


class Slot:
    """One argument of an outer operator: an inner operator applied to some of the new variables."""

    __slots__ = ("op", "vars")

    def __init__(self, op: Optional[MultiOp], vars: Sequence[int]):
        self.op = op
        self.vars = tuple(vars)
        if op is None and len(self.vars) != 1:
            raise ValueError("identity slot takes exactly one variable")
        if op is not None and op.arity != len(self.vars):
            raise ValueError("slot variable count does not match inner arity")

    def parity_in(self, sector: Sector) -> int:
        sub = sum(sector[v] for v in self.vars)
        return (sub + (self.op.parity if self.op is not None else 0)) % 2

    def poly(self, sector: Sector) -> Dict[Ds, RatFunc]:
        if self.op is None:
            return {(0,): ONE}
        return self.op.terms.get(tuple(sector[v] for v in self.vars), {})


def compose_into(result: MultiOp, outer: MultiOp, slots: Sequence[Slot],
                 sign: Callable[[Sector], int] = lambda s: 1, coeff: RatFunc = ONE) -> MultiOp:
    """Accumulate coeff * sign(sector) * outer(slot_1, ..., slot_r) into ``result`` (in place)."""
    n = result.arity
    covered = sorted(v for s in slots for v in s.vars)
    if covered != list(range(n)):
        raise ValueError("slots must partition the result variables")
    for pars in result.sectors():
        sg = sign(pars)
        if not sg:
            continue
        key = tuple(s.parity_in(pars) for s in slots)
        oterms = outer.terms.get(key)
        if not oterms:
            continue
        polys = [s.poly(pars) for s in slots]
        if any(not p for p in polys):
            continue
        target = result.terms.get(pars)
        D = sector_dsum(pars, result.parity, result.N)
        for ods, oc in oterms.items():
            parts = [_derive_poly(p, d) for p, d in zip(polys, ods)]
            if any(not p for p in parts):
                continue
            base = oc * coeff if coeff is not ONE else oc
            if sg != 1:
                base = base.scale(Fraction(sg))
            for combo in itertools.product(*[list(p.items()) for p in parts]):
                full = [0] * n
                c = base
                for (lds, lc), slot in zip(combo, slots):
                    for v, d in zip(slot.vars, lds):
                        full[v] = d
                    c = c * lc
                full = tuple(full)
                if D is None or sum(full) != D:
                    raise HomogeneityError("composition produced an inhomogeneous term")
                if target is None:
                    target = result.terms.setdefault(pars, {})
                w = target.get(full)
                target[full] = c if w is None else w + c
        if target is not None:
            for k in [k for k, v in target.items() if v.is_zero()]:
                del target[k]
            if not target:
                result.terms.pop(pars, None)
    return result


# -- standard operators ---------------------------------------------------

def bracket_op() -> MultiOp:
    """{F,G} = FG' - F'G + 1/2 (-1)^{p(F)+1} etabar(F) etabar(G) on F_{-1} x F_{-1} -> F_{-1}."""
    return MultiOp.from_eta((ADJOINT, ADJOINT), ADJOINT, [
        ((0, 2), -1),
        ((2, 0), 1),
        ((1, 1), lambda p: HALF * (1 if p[0] else -1)),
    ])


def action_op(mu: Weight) -> MultiOp:
    """L^mu_X(phi) = X phi' + 1/2 (-1)^{p(X)+1} etabar(X) etabar(phi) + mu X' phi."""
    m = mu.as_ratfunc()
    return MultiOp.from_eta((ADJOINT, mu), mu, [
        ((0, 2), -1),
        ((1, 1), lambda p: HALF * (1 if p[0] else -1)),
        ((2, 0), -m),
    ])


def apply_bilin(B: MultiOp, F: SuperPoly, phi: SuperPoly) -> SuperPoly:
    if B.arity != 2:
        raise ValueError("apply_bilin expects a bilinear operator")
    F.require_homogeneous()
    phi.require_homogeneous()
    return B.apply(F, phi)


def lie_on_linop_op(A: MultiOp) -> MultiOp:
    """The bilinear operator (G, phi) -> L^mu_G(A phi) - (-1)^{p(A)p(G)} A(L^lam_G phi)."""
    if A.arity != 1:
        raise ValueError("lie_on_linop expects a linear operator")
    lam, mu = A.ins[0], A.out
    res = MultiOp((ADJOINT, lam), mu)
    compose_into(res, action_op(mu), [Slot(None, [0]), Slot(A, [1])])
    compose_into(res, A, [Slot(action_op(lam), [0, 1])],
                 sign=lambda s: 1 if (A.parity and s[0]) else -1)
    return res


class EvaluatedOperator:
    """A linear map on densities obtained by fixing the first argument of a bilinear operator."""

    def __init__(self, op: MultiOp, first: SuperPoly):
        self.op = op
        self.first = first

    def __call__(self, phi: SuperPoly) -> SuperPoly:
        return self.op.apply(self.first, phi)


def lie_on_linop(F: SuperPoly, A: MultiOp) -> EvaluatedOperator:
    F.require_homogeneous()
    return EvaluatedOperator(lie_on_linop_op(A), F)


def eta_bar_linop(src: Weight, power: int, c=1) -> MultiOp:
    """c * etabar^power : F_src -> F_{src + power/2}."""
    return MultiOp.from_eta((src,), src + Fraction(power, 2), [((power,), c)])
