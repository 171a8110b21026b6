"""The contact superalgebra K(1): fields v_F stored by their generator F."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional

from .superspace import EVEN, ODD, SuperPoly, d_x, eta_bar

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class BasisIndex:
    kind: int  # 0: v[x^n], 1: v[th*x^n]
    n: int

    def generator(self) -> SuperPoly:
        return SuperPoly.monomial(self.kind, self.n)

    def render(self) -> str:
        if self.kind == EVEN:
            return "v[1]" if self.n == 0 else ("v[x]" if self.n == 1 else f"v[x^{self.n}]")
        return "v[th]" if self.n == 0 else ("v[th*x]" if self.n == 1 else f"v[th*x^{self.n}]")


@dataclass(frozen=True)
class ContactField:
    generator: SuperPoly

    @property
    def parity(self) -> int:
        return self.generator.require_homogeneous()

    def apply(self, phi: SuperPoly) -> SuperPoly:
        """v_F(phi) = F phi' + 1/2 (-1)^{p(F)+1} etabar(F) etabar(phi)."""
        F = self.generator
        sign = 1 if self.parity == ODD else -1
        return F * d_x(phi) + (eta_bar(F) * eta_bar(phi)).scale(HALF * sign)

    def render(self) -> str:
        return f"v[{self.generator.render()}]"


def contact_bracket(F: SuperPoly, G: SuperPoly, half: Fraction = HALF) -> SuperPoly:
    """{F,G} = FG' - F'G + 1/2 (-1)^{p(F)+1} etabar(F) etabar(G).

    ``half`` exists only so tests can corrupt the bracket as a negative control.
    """
    pf = F.require_homogeneous()
    pg = G.require_homogeneous()
    sign = 1 if pf == ODD else -1
    out = F * d_x(G) - d_x(F) * G + (eta_bar(F) * eta_bar(G)).scale(half * sign)
    out.parity = (pf + pg) % 2
    return out


def basis(degree_cap: int) -> List[BasisIndex]:
    return [BasisIndex(k, n) for n in range(degree_cap + 1) for k in (EVEN, ODD)]


@dataclass
class Report:
    ok: bool
    checked: int
    violation: Optional[dict] = None

    def as_dict(self) -> dict:
        d = {"ok": self.ok, "checked": self.checked}
        if self.violation is not None:
            d["violation"] = self.violation
        return d


def check_super_jacobi(degree_cap: int,
                       bracket: Callable[[SuperPoly, SuperPoly], SuperPoly] = contact_bracket) -> Report:
    """Graded Jacobi {F,{G,H}} = {{F,G},H} + (-1)^{pF pG} {G,{F,H}} on basis triples."""
    if degree_cap < 2:
        raise ValueError("degree_cap must be at least 2")
    elems = basis(degree_cap)
    gens = [b.generator() for b in elems]
    inner = {}

    def br(i, j):
        key = (i, j)
        if key not in inner:
            inner[key] = bracket(gens[i], gens[j])
        return inner[key]

    n = len(elems)
    checked = 0
    for a in range(n):
        for b in range(a, n):
            for c in range(b, n):
                F, G, H = gens[a], gens[b], gens[c]
                lhs = bracket(F, br(b, c))
                sgn = -1 if (F.parity and G.parity) else 1
                rhs = bracket(br(a, b), H) + bracket(G, br(a, c)).scale(sgn)
                checked += 1
                if lhs != rhs:
                    return Report(False, checked, {
                        "triple": [elems[a].render(), elems[b].render(), elems[c].render()],
                        "residual": (lhs - rhs).render()})
    return Report(True, checked)


def check_super_antisymmetry(degree_cap: int) -> Report:
    elems = basis(degree_cap)
    checked = 0
    for A in elems:
        for B in elems:
            F, G = A.generator(), B.generator()
            sgn = 1 if (F.parity and G.parity) else -1
            checked += 1
            if contact_bracket(F, G) != contact_bracket(G, F).scale(sgn):
                return Report(False, checked, {"pair": [A.render(), B.render()]})
    return Report(True, checked)


def osp12_generators() -> List[ContactField]:
    """Generators 1, x, x^2, th, x*th of the osp(1|2) subalgebra."""
    return [ContactField(SuperPoly.monomial(EVEN, 0)), ContactField(SuperPoly.monomial(EVEN, 1)),
            ContactField(SuperPoly.monomial(EVEN, 2)), ContactField(SuperPoly.monomial(ODD, 0)),
            ContactField(SuperPoly.monomial(ODD, 1))]


def in_osp12_span(F: SuperPoly) -> bool:
    return F.degree() <= 2 and not any(k > 1 for k in F.f1)
