"""Supertransvectants J^{alpha,beta}_k : F_alpha x F_beta -> F_{alpha+beta+k}.

Two coefficient tables are available.  ``printed`` evaluates the closed formula
exactly as published (floor brackets, generalized binomials).  ``kernel``
computes the osp(1|2)-invariant operator directly as the one-dimensional
solution space of the invariance equations, normalized so that its
coefficient of etabar^{2k}(f) g agrees with the printed one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence

from .bilinops import MultiOp, Slot, action_op, compose_into
from .contact import Report, osp12_generators
from .densities import ADJOINT, Weight
from .scalars import ONE, RatFunc, rf
from .superspace import SuperPoly


class IllFormedCoefficient(ValueError):
    pass


@dataclass(frozen=True)
class TransvectantSpec:
    alpha: Weight
    beta: Weight
    k: Fraction

    def __post_init__(self):
        object.__setattr__(self, "k", Fraction(self.k))
        if (2 * self.k).denominator != 1 or self.k < 0:
            raise ValueError(f"transvectant order {self.k} must be a nonnegative half-integer")

    @property
    def out(self) -> Weight:
        return self.alpha + self.beta + self.k


def floor_half(q) -> int:
    """Integer part [q] for the half-integers occurring in the closed formula."""
    return math.floor(Fraction(q))


def gen_binom(a: RatFunc, b) -> RatFunc:
    """binom(a, b) = a(a-1)...(a-b+1)/b! for symbolic a and integer b (0 if b < 0)."""
    b = Fraction(b)
    if b.denominator != 1:
        raise IllFormedCoefficient(f"binomial lower index {b} is not an integer")
    b = int(b)
    if b < 0:
        return RatFunc.const(0)
    out = ONE
    for t in range(b):
        out = out * (a - t)
    return out.scale(Fraction(1, math.factorial(b)))


def printed_coefficient(k: Fraction, i: int, j: int, pf: int, alpha: RatFunc, beta: RatFunc) -> RatFunc:
    k = Fraction(k)
    e2k = 1 if (2 * k) % 2 == 0 else -1
    sign = (-1) ** ((floor_half(Fraction(j + 1, 2)) + j * (i + pf)) % 2)
    num1 = gen_binom(RatFunc.const(floor_half(k)), Fraction(2 * j + 1 + e2k, 4).__floor__())
    num2 = gen_binom(alpha.scale(2) + floor_half(k - Fraction(1, 2)), Fraction(2 * j + 1 - e2k, 4).__floor__())
    den = gen_binom(beta.scale(2) + floor_half(Fraction(j - 1, 2)), floor_half(Fraction(j + 1, 2)))
    if den.is_zero():
        raise IllFormedCoefficient(f"vanishing denominator at i={i}, j={j}")
    return (num1 * num2 / den).scale(Fraction(sign))


def printed_transvectant(spec: TransvectantSpec) -> MultiOp:
    a, b = spec.alpha.as_ratfunc(), spec.beta.as_ratfunc()
    n = int(2 * spec.k)
    terms = []
    for i in range(n + 1):
        j = n - i
        terms.append(((i, j), lambda pars, i=i, j=j: printed_coefficient(spec.k, i, j, pars[0], a, b)))
    return MultiOp.from_eta((spec.alpha, spec.beta), spec.out, terms)


def invariance_residual(J: MultiOp) -> MultiOp:
    """R(X, f, g) = L_X J(f,g) - (-1)^{pX pJ} [J(L_X f, g) + (-1)^{pX pf} J(f, L_X g)]."""
    a, b = J.ins
    R = MultiOp((ADJOINT, a, b), J.out)
    compose_into(R, action_op(J.out), [Slot(None, [0]), Slot(J, [1, 2])])
    pj = J.parity
    compose_into(R, J, [Slot(action_op(a), [0, 1]), Slot(None, [2])],
                 sign=lambda s: 1 if (s[0] and pj) else -1)
    compose_into(R, J, [Slot(None, [1]), Slot(action_op(b), [0, 2])],
                 sign=lambda s: (1 if (s[0] and pj) else -1) * (-1 if (s[0] and s[1]) else 1))
    return R


def check_osp_invariance(spec: TransvectantSpec, degree_cap: int = 8, table: str = "printed",
                         J: Optional[MultiOp] = None) -> Report:
    """Evaluate the invariance residual on the osp(1|2) generators against monomials f, g."""
    J = J if J is not None else transvectant(spec, table)
    R = invariance_residual(J)
    checked = 0
    for X in osp12_generators():
        for pf in (0, 1):
            for pg in (0, 1):
                for m in range(degree_cap + 1):
                    for n in range(degree_cap + 1 - m):
                        f, g = SuperPoly.monomial(pf, m), SuperPoly.monomial(pg, n)
                        val = R.apply(X.generator, f, g)
                        checked += 1
                        if not val.is_zero():
                            return Report(False, checked, {
                                "generator": X.render(), "f": f.render(), "g": g.render(),
                                "residual": val.render(), "k": str(spec.k)})
    return Report(True, checked)


_KERNEL_CACHE: Dict[tuple, MultiOp] = {}


def kernel_transvectant(spec: TransvectantSpec) -> MultiOp:
    """The osp(1|2)-invariant operator of order 2k, found by exact linear algebra."""
    from .linsolve import nullspace

    key = (spec.alpha, spec.beta, spec.k)
    if key in _KERNEL_CACHE:
        return _KERNEL_CACHE[key]
    shape = MultiOp((spec.alpha, spec.beta), spec.out)
    basis = shape.basis_terms()
    cols = []
    for pars, ds in basis:
        e = shape.copy_empty()
        e.add_term(pars, ds, 1)
        R = invariance_residual(e)
        # invariance under v_1, v_x, v_{x^2}, v_th, v_{x th}: keep residual terms in X of low order
        cols.append(_osp_projection(R))
    rows = sorted({r for c in cols for r in c})
    mat = [[c.get(r, RatFunc.const(0)) for c in cols] for r in rows]
    ns = nullspace(mat, len(basis))
    if len(ns) != 1:
        raise IllFormedCoefficient(f"invariant space for {spec} has dimension {len(ns)}")
    vec = ns[0]
    J = shape.copy_empty()
    for (pars, ds), c in zip(basis, vec):
        J.add_term(pars, ds, c)
    ref = printed_transvectant(spec)
    n = int(2 * spec.k)
    scale = None
    for pars in J.sectors():
        probe = shape.copy_empty()
        probe.add_eta_term(pars, (n, 0), 1)
        for (p, d), _ in probe.items():
            if J.coeff(p, d) and ref.coeff(p, d):
                scale = ref.coeff(p, d) / J.coeff(p, d)
                break
        if scale is not None:
            break
    J = J.scale(scale if scale is not None else ONE)
    _KERNEL_CACHE[key] = J
    return J


def _osp_projection(R: MultiOp) -> Dict[tuple, RatFunc]:
    """Coefficients of R restricted to X in osp(1|2): X = x^m (m <= 2) or th x^m (m <= 1).

    In value form R(X,f,g) only sees D^{d_X} of the x-part of X, so R vanishes on
    osp(1|2) iff all terms with d_X <= 2 (even X) or d_X <= 1 (odd X) vanish after
    pairing with the generator's derivatives; those terms are independent.
    """
    out = {}
    for (pars, ds), c in R.items():
        if (pars[0] == 0 and ds[0] <= 2) or (pars[0] == 1 and ds[0] <= 1):
            out[(pars, ds)] = c
    return out


def transvectant(spec: TransvectantSpec, table: str = "printed") -> MultiOp:
    if table == "printed":
        return printed_transvectant(spec)
    if table == "kernel":
        return kernel_transvectant(spec)
    raise ValueError(f"unknown transvectant table {table!r}")


def transvectant_json(spec: TransvectantSpec, table: str = "printed") -> dict:
    d = transvectant(spec, table).to_json()
    d.update({"alpha": str(spec.alpha), "beta": str(spec.beta),
              "k": str(spec.k), "table": table})
    return d
