"""Weighted densities f(x,th) a^mu with symbolic weight mu = c*lam + b."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .contact import HALF, Report, basis, contact_bracket
from .scalars import LAM, RatFunc, rf
from .superspace import EVEN, ODD, SuperPoly, d_x, eta_bar


@dataclass(frozen=True, order=True)
class Weight:
    lam_coeff: int
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        if (2 * self.offset).denominator != 1:
            raise ValueError(f"weight offset {self.offset} is not a half-integer")

    @classmethod
    def const(cls, b) -> "Weight":
        return cls(0, Fraction(b))

    @classmethod
    def lam(cls, b=0) -> "Weight":
        return cls(1, Fraction(b))

    def __add__(self, other) -> "Weight":
        if isinstance(other, Weight):
            return Weight(self.lam_coeff + other.lam_coeff, self.offset + other.offset)
        return Weight(self.lam_coeff, self.offset + Fraction(other))

    def __sub__(self, other) -> "Weight":
        if isinstance(other, Weight):
            return Weight(self.lam_coeff - other.lam_coeff, self.offset - other.offset)
        return Weight(self.lam_coeff, self.offset - Fraction(other))

    def __neg__(self) -> "Weight":
        return Weight(-self.lam_coeff, -self.offset)

    def is_const(self) -> bool:
        return self.lam_coeff == 0

    def as_ratfunc(self) -> RatFunc:
        return LAM.scale(Fraction(self.lam_coeff)) + RatFunc.const(self.offset) if self.lam_coeff \
            else RatFunc.const(self.offset)

    def specialize(self, lam0) -> "Weight":
        return Weight(0, self.lam_coeff * Fraction(lam0) + self.offset)

    def render(self, var: str = "lam") -> str:
        b = self.offset
        bs = str(b.numerator) if b.denominator == 1 else f"{b.numerator}/{b.denominator}"
        if self.lam_coeff == 0:
            return bs
        head = var if self.lam_coeff == 1 else ("-" + var if self.lam_coeff == -1 else f"{self.lam_coeff}*{var}")
        if b == 0:
            return head
        absb = -b if b < 0 else b
        bs = str(absb.numerator) if absb.denominator == 1 else f"{absb.numerator}/{absb.denominator}"
        return f"{head}{'-' if b < 0 else '+'}{bs}"

    def __str__(self):
        return self.render()


ADJOINT = Weight.const(-1)


@dataclass(frozen=True)
class Density:
    coeff: SuperPoly
    weight: Weight

    def render(self) -> str:
        c = self.coeff.render()
        if len(self.coeff.f0) + len(self.coeff.f1) > 1:
            c = f"({c})"
        return f"{c} * a^({self.weight.render()})"


def lie_density(F: SuperPoly, phi: SuperPoly, mu, corrupt: bool = False) -> SuperPoly:
    """L^mu_F(phi) = F phi' + 1/2 (-1)^{p(F)+1} etabar(F) etabar(phi) + mu F' phi."""
    pf = F.require_homogeneous()
    pp = phi.require_homogeneous()
    mu = mu.as_ratfunc() if isinstance(mu, Weight) else rf(mu)
    sign = 1 if pf == ODD else -1
    if corrupt and pf == ODD:
        sign = -sign
    out = F * d_x(phi) + (eta_bar(F) * eta_bar(phi)).scale(HALF * sign) + (d_x(F) * phi).scale(mu)
    out.parity = (pf + pp) % 2
    return out


def act(F: SuperPoly, phi: Density) -> Density:
    return Density(lie_density(F, phi.coeff, phi.weight), phi.weight)


def check_representation(degree_cap: int, weight: Optional[Weight] = None, corrupt: bool = False) -> Report:
    """[L_F, L_G] = L_{F,G} on basis pairs and density monomials, symbolically in the weight."""
    weight = weight if weight is not None else Weight.lam()
    mu = weight.as_ratfunc()
    elems = basis(degree_cap)
    gens = [b.generator() for b in elems]
    checked = 0
    for a, F in enumerate(gens):
        for b in range(a, len(gens)):
            G = gens[b]
            FG = contact_bracket(F, G)
            sgn = -1 if (F.parity and G.parity) else 1
            for phi_idx in elems:
                phi = phi_idx.generator()
                lhs = lie_density(F, lie_density(G, phi, mu, corrupt), mu, corrupt) \
                    - lie_density(G, lie_density(F, phi, mu, corrupt), mu, corrupt).scale(sgn)
                rhs = lie_density(FG, phi, mu, corrupt)
                checked += 1
                if lhs != rhs:
                    return Report(False, checked, {
                        "pair": [elems[a].render(), elems[b].render()],
                        "density": Density(phi, weight).render(),
                        "residual": (lhs - rhs).render()})
    return Report(True, checked)


def euler_eigenvalue(m: int, weight: Weight) -> RatFunc:
    """Eigenvalue of L_x on x^m a^mu, i.e. m + mu."""
    return RatFunc.const(m) + weight.as_ratfunc()


__all__ = ["Weight", "Density", "ADJOINT", "act", "lie_density", "check_representation",
           "euler_eigenvalue", "EVEN", "ODD"]
