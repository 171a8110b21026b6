"""Chevalley-Eilenberg cochains of K(1) with values in differential operators.

A 1-cochain K(1) -> D_{lam,mu} is a bilinear operator F_{-1} x F_lam -> F_mu and
a 2-cochain is a trilinear one F_{-1} x F_{-1} x F_lam -> F_mu; both live in
the value form of ``bilinops``.  Coboundary problems are finite linear systems
over Q(lam) whose unknowns are the coefficients of a constant-coefficient
cochain; δ preserves the Euler grading so nothing is lost by that restriction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .bilinops import MultiOp, Slot, action_op, bracket_op, compose_into
from .densities import ADJOINT, Weight
from .linsolve import (Analysis, Pole, RatFuncField, ResidueField, analyze, divisor_factors, rref)
from .scalars import LAM, LamPoly, ONE, ZERO, RatFunc, factor_poly, rf
from .superspace import EVEN, ODD, SuperPoly, d_x, eta, eta_bar


class UnknownCocycle(KeyError):
    pass


# -- cochain spaces ---------------------------------------------------------

def linop_space(src: Weight, shift) -> MultiOp:
    return MultiOp((src,), src + Fraction(shift))


def cochain1_space(src: Weight, shift) -> MultiOp:
    return MultiOp((ADJOINT, src), src + Fraction(shift))


def cochain2_space(src: Weight, shift) -> MultiOp:
    return MultiOp((ADJOINT, ADJOINT, src), src + Fraction(shift))


def _odd(x: int) -> bool:
    return bool(x % 2)


def delta0(A: MultiOp) -> MultiOp:
    """(δA)(G) = (-1)^{p(G)p(A)} L_G∘A - A∘L_G."""
    if A.arity != 1:
        raise ValueError("delta0 expects a linear operator")
    lam, mu = A.ins[0], A.out
    pa = A.parity
    res = MultiOp((ADJOINT, lam), mu)
    compose_into(res, action_op(mu), [Slot(None, [0]), Slot(A, [1])],
                 sign=lambda s: -1 if (pa and s[0]) else 1)
    compose_into(res, A, [Slot(action_op(lam), [0, 1])], sign=lambda s: -1)
    return res


def delta1(g: MultiOp) -> MultiOp:
    """(δγ)(G,H) = γ({G,H}) - (-1)^{pG pγ}[L_G, γ(H)] + (-1)^{pH(pG+pγ)}[L_H, γ(G)].

    Here [L_G, A] = L_G∘A - (-1)^{pG pA} A∘L_G with p(A) = p(γ) + p(H).
    """
    if g.arity != 2 or g.ins[0] != ADJOINT:
        raise ValueError("delta1 expects a 1-cochain (F_-1 x F_lam -> F_mu)")
    lam, mu = g.ins[1], g.out
    pg = g.parity
    res = MultiOp((ADJOINT, ADJOINT, lam), mu)
    compose_into(res, g, [Slot(bracket_op(), [0, 1]), Slot(None, [2])])
    # -(-1)^{pG pγ} L_G(γ(H) F)
    compose_into(res, action_op(mu), [Slot(None, [0]), Slot(g, [1, 2])],
                 sign=lambda s: 1 if _odd(s[0] * pg) else -1)
    # +(-1)^{pG pH} γ(H)(L_G F)
    compose_into(res, g, [Slot(None, [1]), Slot(action_op(lam), [0, 2])],
                 sign=lambda s: -1 if _odd(s[0] * s[1]) else 1)
    # +(-1)^{pH(pG+pγ)} L_H(γ(G) F)
    compose_into(res, action_op(mu), [Slot(None, [1]), Slot(g, [0, 2])],
                 sign=lambda s: -1 if _odd(s[1] * (s[0] + pg)) else 1)
    # -γ(G)(L_H F)
    compose_into(res, g, [Slot(None, [0]), Slot(action_op(lam), [1, 2])], sign=lambda s: -1)
    return res


def cup(g1: MultiOp, g2: MultiOp) -> MultiOp:
    """[[γ1,γ2]](G,H) = (-1)^{pG pγ2} γ1(G)∘γ2(H) - (-1)^{pH(pG+pγ2)} γ1(H)∘γ2(G)."""
    from .bilinops import WeightMismatch

    if g2.out != g1.ins[1]:
        raise WeightMismatch(f"cannot compose {g1.signature()} after {g2.signature()}")
    p2 = g2.parity
    res = MultiOp((ADJOINT, ADJOINT, g2.ins[1]), g1.out)
    compose_into(res, g1, [Slot(None, [0]), Slot(g2, [1, 2])],
                 sign=lambda s: -1 if _odd(s[0] * p2) else 1)
    compose_into(res, g1, [Slot(None, [1]), Slot(g2, [0, 2])],
                 sign=lambda s: 1 if _odd(s[1] * (s[0] + p2)) else -1)
    return res


# evaluation-based references, used by tests as independent oracles

def lie_eval(G: SuperPoly, phi: SuperPoly, mu) -> SuperPoly:
    from .densities import lie_density
    return lie_density(G, phi, mu)


def delta1_eval(g: MultiOp, G: SuperPoly, H: SuperPoly, F: SuperPoly) -> SuperPoly:
    from .contact import contact_bracket

    lam, mu = g.ins[1].as_ratfunc(), g.out.as_ratfunc()
    pG, pH, pF = G.require_homogeneous(), H.require_homogeneous(), F.require_homogeneous()
    pg = g.parity
    pA_H = (pg + pH) % 2
    pA_G = (pg + pG) % 2

    def comm(X, pX, A, pA, Y):
        left = lie_eval(X, A(Y), mu)
        right = A(lie_eval(X, Y, lam))
        return left - (right if not (pX * pA) % 2 else -right)

    out = g.apply(contact_bracket(G, H), F)
    t2 = comm(G, pG, lambda Y: g.apply(H, Y), pA_H, F)
    t3 = comm(H, pH, lambda Y: g.apply(G, Y), pA_G, F)
    out = out - (t2 if (pG * pg) % 2 == 0 else -t2)
    out = out + (t3 if (pH * (pG + pg)) % 2 == 0 else -t3)
    return out


# -- catalog ------------------------------------------------------------------

@dataclass(frozen=True)
class CocycleId:
    name: str
    src: Weight
    shift: Fraction
    validity: str = "generic"  # "generic" or "special"
    locus: Optional[tuple] = None  # coefficients (low first) of the polynomial whose roots are the weights
    source: str = "printed"  # "printed" or "kernel"

    @property
    def parity(self) -> int:
        return int(2 * self.shift) % 2

    @property
    def locus_poly(self) -> Optional[LamPoly]:
        return LamPoly(self.locus) if self.locus is not None else None

    def render(self) -> str:
        return self.name


def _sgn(p: int) -> int:
    return -1 if p % 2 else 1


def _dn(F: SuperPoly, n: int) -> SuperPoly:
    for _ in range(n):
        F = d_x(F)
    return F


def _gamma_diag(G, F, lam):
    return d_x(G) * F


def _gamma_2(G, F, lam):
    # sign of the etabar term flipped relative to the print (the printed one fails δγ = 0)
    return _dn(G, 3) * F.scale(2 * lam) - (eta_bar(_dn(G, 2)) * eta_bar(F)).scale(3 * _sgn(G.parity))


def _gamma_2_printed(G, F, lam):
    return _dn(G, 3) * F.scale(2 * lam) + (eta_bar(_dn(G, 2)) * eta_bar(F)).scale(3 * _sgn(G.parity))


def _gamma_03_printed(G, F, lam):
    s = _sgn(G.parity)
    return (_dn(G, 4) * F - (eta_bar(_dn(G, 3)) * eta_bar(F)).scale(s) + _dn(G, 3) * _dn(F, 2)
            + (eta_bar(_dn(G, 2)) * eta_bar(d_x(F))).scale(Fraction(3, 2) * s))


def _gamma_m52_printed(G, F, lam):
    s = _sgn(G.parity)
    return (_dn(G, 4) * F - (eta_bar(_dn(G, 3)) * eta_bar(F)).scale(s) + _dn(G, 3) * d_x(F)
            - (eta_bar(_dn(G, 2)) * eta_bar(d_x(F))).scale(Fraction(3, 8) * s))


def _gamma_4_printed(G, F, lam):
    s = _sgn(G.parity)
    return (_dn(G, 5) * F + (eta_bar(_dn(G, 4)) * eta_bar(F)).scale(s * Fraction(5, 2) / lam)
            - (_dn(G, 4) * d_x(F)).scale(5 / lam)
            - (eta_bar(_dn(G, 3)) * eta_bar(d_x(F))).scale(s * 20 / (lam * (2 * lam + 1))))


def _gamma_012(G, F, lam):
    return eta_bar(d_x(G)) * F


def _gamma_012_printed(G, F, lam):
    return eta(d_x(G)) * F


def _gamma_012t(G, F, lam):
    return eta_bar(d_x(G) * F)


def _gamma_012t_printed(G, F, lam):
    return eta(d_x(G) * F).scale(_sgn(F.parity))


def _gamma_m121_printed(G, F, lam):
    sg, sf = _sgn(G.parity), _sgn(F.parity)
    eG2 = eta(_dn(G, 2))
    eG = eta(G)
    out = (eG2 + eG2.scale(sg)).scale(Fraction(3, 2)) * F
    out = out - (eG - eG.scale(sg)).scale(Fraction(1, 2)) * _dn(F, 2)
    inner = eta(d_x(G)) * d_x(F) + (_dn(G, 2) + _dn(G, 2).scale(sg)).scale(Fraction(1, 2)) * eta(F)
    out = out + inner.scale(sf)
    out = out + (eG2 * (F + F.scale(sf))).scale(-sg)
    return out


def _gamma_32(G, F, lam):
    return eta_bar(_dn(G, 2)) * F


def _gamma_52_printed(G, F, lam):
    # the displayed generator for shift 5/2 repeats the shift-2 formula verbatim
    return _gamma_2_printed(G, F, lam)


# γ_{λ,λ+5/2} = GAMMA52_SCALE·λ·J^{-1,λ}_{7/2}; the scale fixes the 1/3 weight in the shift-4 relation
GAMMA52_SCALE = Fraction(-18)

_Q4 = (Fraction(2), Fraction(7), Fraction(2))


def _cid(name, src, shift, validity="generic", locus=None, source="printed"):
    return CocycleId(name, src, Fraction(shift), validity, locus, source)


# name -> (id, stored formula or None, literal printed formula)
CATALOG: Dict[str, tuple] = {
    "gamma[lam,lam]": (_cid("gamma[lam,lam]", Weight.lam(), 0), _gamma_diag, _gamma_diag),
    "gamma[lam,lam+3/2]": (_cid("gamma[lam,lam+3/2]", Weight.lam(), Fraction(3, 2)), _gamma_32, _gamma_32),
    "gamma[lam,lam+2]": (_cid("gamma[lam,lam+2]", Weight.lam(), 2, source="corrected"), _gamma_2,
                         _gamma_2_printed),
    "gamma[lam,lam+5/2]": (_cid("gamma[lam,lam+5/2]", Weight.lam(), Fraction(5, 2), source="transvectant"),
                           None, _gamma_52_printed),
    "gamma[0,1/2]": (_cid("gamma[0,1/2]", Weight.const(0), Fraction(1, 2), "special", (0, 1), "corrected"),
                     _gamma_012, _gamma_012_printed),
    "gammat[0,1/2]": (_cid("gammat[0,1/2]", Weight.const(0), Fraction(1, 2), "special", (0, 1), "corrected"),
                      _gamma_012t, _gamma_012t_printed),
    "gamma[-1/2,1]": (_cid("gamma[-1/2,1]", Weight.const(Fraction(-1, 2)), Fraction(3, 2), "special",
                           (Fraction(1, 2), 1), "kernel"), None, _gamma_m121_printed),
    "gamma[0,3]": (_cid("gamma[0,3]", Weight.const(0), 3, "special", (0, 1), "kernel"), None, _gamma_03_printed),
    "gamma[-5/2,1/2]": (_cid("gamma[-5/2,1/2]", Weight.const(Fraction(-5, 2)), 3, "special",
                             (Fraction(5, 2), 1), "kernel"), None, _gamma_m52_printed),
    "gamma[a,a+4]": (_cid("gamma[a,a+4]", Weight.lam(), 4, "special", _Q4, "kernel"), None, _gamma_4_printed),
}

GENERIC_SHIFTS = (Fraction(0), Fraction(3, 2), Fraction(2), Fraction(5, 2))
_GENERIC_BY_SHIFT = {Fraction(0): "gamma[lam,lam]", Fraction(3, 2): "gamma[lam,lam+3/2]",
                     Fraction(2): "gamma[lam,lam+2]", Fraction(5, 2): "gamma[lam,lam+5/2]"}


def catalog_ids() -> List[CocycleId]:
    return [v[0] for v in CATALOG.values()]


def cocycle_id(name: str) -> CocycleId:
    try:
        return CATALOG[name][0]
    except KeyError:
        raise UnknownCocycle(name) from None


def _formula_op(cid: CocycleId, fn) -> MultiOp:
    lam = cid.src.as_ratfunc()
    sp = cochain1_space(cid.src, cid.shift)
    return MultiOp.reconstruct(lambda G, F: fn(G, F, lam), sp.ins, sp.out, check_extra=3)


def printed_cocycle(name: str) -> MultiOp:
    """The displayed formula transcribed literally (raises HomogeneityError if it mixes weights)."""
    if name not in CATALOG:
        raise UnknownCocycle(name)
    cid, _, printed = CATALOG[name]
    return _formula_op(cid, printed)


_CAT_CACHE: Dict[str, MultiOp] = {}


def catalog(name: Union[str, CocycleId]) -> MultiOp:
    """The stored generator for a catalog id."""
    if isinstance(name, CocycleId):
        name = name.name
    if name not in CATALOG:
        raise UnknownCocycle(name)
    if name in _CAT_CACHE:
        return _CAT_CACHE[name]
    cid, fn, _ = CATALOG[name]
    if cid.source in ("printed", "corrected"):
        g = _formula_op(cid, fn)
    elif cid.source == "transvectant":
        from .transvectants import TransvectantSpec, transvectant
        J = transvectant(TransvectantSpec(Weight.const(-1), cid.src, cid.shift + 1))
        g = J.scale(LAM.scale(GAMMA52_SCALE) if cid.shift == Fraction(5, 2) else ONE)
    else:
        g = kernel_cocycle(cid)
    _CAT_CACHE[name] = g
    return g


def generic_cocycle(shift, src: Optional[Weight] = None) -> MultiOp:
    """γ_{mu,mu+shift} for mu = src (default lam), from the generic catalog entries."""
    shift = Fraction(shift)
    g = catalog(_GENERIC_BY_SHIFT[shift])
    if src is None or src == Weight.lam():
        return g
    if src.lam_coeff != 1:
        raise ValueError("generic cocycles are indexed by lam + const")
    return g.shift_lam(src.offset)


# -- coboundary systems -------------------------------------------------------

def _field_for(cid: Optional[CocycleId]):
    if cid is not None and cid.validity == "special" and cid.src.lam_coeff:
        return ResidueField(cid.locus_poly)
    return RatFuncField()


class CoboundarySystem:
    """The linear map δ from one cochain space to the next, as a matrix over Q(lam).

    ``level`` 0: linear operators -> 1-cochains; ``level`` 1: 1-cochains -> 2-cochains.
    Rows are value-form coefficient keys (sector, derivative orders) of the target.
    """

    def __init__(self, src: Weight, shift, level: int):
        self.src, self.shift, self.level = src, Fraction(shift), level
        self.space = linop_space(src, shift) if level == 0 else cochain1_space(src, shift)
        self.basis = self.space.basis_terms()
        d = delta0 if level == 0 else delta1
        self.images = []
        for pars, ds in self.basis:
            e = self.space.copy_empty()
            e.add_term(pars, ds, 1)
            self.images.append(d(e))
        self.target = cochain1_space(src, shift) if level == 0 else cochain2_space(src, shift)
        self.rows = [k for k in self.target.basis_terms()]
        self.row_index = {k: i for i, k in enumerate(self.rows)}
        self.matrix = [[ZERO] * len(self.basis) for _ in self.rows]
        for j, img in enumerate(self.images):
            for key, c in img.items():
                self.matrix[self.row_index[key]][j] = c
        self._analysis = {}

    def vector(self, op: MultiOp) -> List[RatFunc]:
        if not (op.ins == self.target.ins and op.out == self.target.out):
            from .bilinops import WeightMismatch
            raise WeightMismatch(f"{op.signature()} is not in {self.target.signature()}")
        v = [ZERO] * len(self.rows)
        for key, c in op.items():
            v[self.row_index[key]] = c
        return v

    def from_solution(self, x: Sequence) -> MultiOp:
        out = self.space.copy_empty()
        for (pars, ds), c in zip(self.basis, x):
            out.add_term(pars, ds, c)
        return out

    def analysis(self, F=None) -> Analysis:
        key = None if F is None else getattr(F, "name", repr(F))
        if key not in self._analysis:
            F = F or RatFuncField()
            mat = [[F.convert(a) for a in row] for row in self.matrix] if F.name != "Q(lam)" else self.matrix
            self._analysis[key] = analyze(mat, len(self.basis), F)
        return self._analysis[key]

    def _transform(self):
        # rows of T with T * A_sel = rref(A_sel); reused for every right-hand side
        if not hasattr(self, "_T"):
            an = self.analysis()
            F = an.field
            r = len(an.selected)
            rows = [list(an.rows[i]) + [F.one() if j == k else F.zero() for j in range(r)]
                    for k, i in enumerate(an.selected)]
            R, piv, _ = rref(rows, an.n, F, width=an.n + r)
            self._T = ([row[an.n:] for row in R], piv)
        return self._T

    def decompose(self, v: Sequence[RatFunc]) -> Tuple[List[RatFunc], Dict[tuple, RatFunc]]:
        """Split a target vector as A x + residue, with x zero on free columns.

        The residue vanishes on the selected (independent) rows, so it is a
        canonical representative of v modulo the image of δ.
        """
        an = self.analysis()
        T, piv = self._transform()
        sel = [v[i] for i in an.selected]
        x = [ZERO] * an.n
        for trow, pc in zip(T, piv):
            acc = ZERO
            for t, b in zip(trow, sel):
                if not t.is_zero() and not b.is_zero():
                    acc = acc + t * b
            x[pc] = acc
        nz = [(j, c) for j, c in enumerate(x) if not c.is_zero()]
        res = {}
        for i, key in enumerate(self.rows):
            acc = v[i]
            row = self.matrix[i]
            for j, c in nz:
                if not row[j].is_zero():
                    acc = acc - row[j] * c
            if not acc.is_zero():
                res[key] = acc
        return x, res

    def triple(self, key) -> dict:
        """The monomial inputs whose evaluation isolates the coefficient at ``key``."""
        pars, ds = key
        names = ["G", "H", "F"] if self.level == 1 else ["G", "F"]
        out = {}
        for n, p, d in zip(names, pars, ds):
            out[n] = SuperPoly.monomial(p, d).render()
        scale = 1
        for d in ds:
            scale *= factorial(d)
        out["scale"] = scale
        return out


_SYSTEMS: Dict[tuple, CoboundarySystem] = {}


def coboundary_system(src: Weight, shift, level: int) -> CoboundarySystem:
    key = (src, Fraction(shift), level)
    if key not in _SYSTEMS:
        _SYSTEMS[key] = CoboundarySystem(src, shift, level)
    return _SYSTEMS[key]


# -- results -------------------------------------------------------------------

@dataclass
class Trivial:
    witness: MultiOp
    exceptional_factors: List[LamPoly] = field(default_factory=list)
    kind = "trivial"

    def as_dict(self) -> dict:
        d = {"trivial": True, "witness": self.witness.to_json()}
        if self.exceptional_factors:
            d["trivial"] = {"off_locus": [f.render() for f in self.exceptional_factors]}
        return d


class TrivialOffLocus(Trivial):
    """Trivial for generic lam; the witness has poles along the listed factors."""
    kind = "trivial_off_locus"


@dataclass
class NonTrivial:
    certificate: dict
    kind = "nontrivial"

    def as_dict(self) -> dict:
        return {"trivial": False, "certificate": _cert_json(self.certificate)}


def _cert_json(cert: dict) -> dict:
    out = {}
    for k, v in cert.items():
        if hasattr(v, "render"):
            out[k] = v.render()
        elif isinstance(v, list):
            out[k] = [{kk: (vv.render() if hasattr(vv, "render") else vv) for kk, vv in e.items()}
                      if isinstance(e, dict) else e for e in v]
        else:
            out[k] = v
    return out


def _denominator_factors(op: MultiOp) -> List[LamPoly]:
    seen, out = set(), []
    for _, c in op.items():
        if c.den.is_const():
            continue
        for f, _ in factor_poly(c.den):
            if f.c not in seen:
                seen.add(f.c)
                out.append(f)
    return sorted(out, key=lambda f: (f.degree, f.c))


def _certificate(system: CoboundarySystem, cert: dict) -> dict:
    rows = []
    for i, y in sorted(cert["combination"].items()):
        key = system.rows[i]
        entry = {"inputs": system.triple(key), "sector": list(key[0]), "orders": list(key[1]),
                 "weight": y}
        rows.append(entry)
    return {"equations": rows, "value": cert["value"],
            "statement": "sum of weight * coefficient(delta b) over the listed evaluations vanishes "
                         "for every b, but the same combination of the target is nonzero"}


def solve_in_system(system: CoboundarySystem, target: MultiOp, F=None):
    an = system.analysis(F)
    rhs = system.vector(target)
    if F is not None and F.name != "Q(lam)":
        rhs = [F.convert(a) for a in rhs]
    x, cert = an.solve(rhs)
    return x, cert


def solve_coboundary(B: MultiOp) -> Union[Trivial, NonTrivial]:
    """Solve δb = B for a 1-cochain b (B a 2-cochain) or δA = B for a linear operator A (B a 1-cochain)."""
    level = 1 if B.arity == 3 else 0
    src = B.ins[-1]
    shift = (B.out - src).offset
    system = coboundary_system(src, shift, level)
    x, cert = solve_in_system(system, B)
    if x is None:
        return NonTrivial(_certificate(system, cert))
    w = system.from_solution(x)
    loci = _denominator_factors(w)
    return TrivialOffLocus(w, loci) if loci else Trivial(w)


def check_certificate(system: CoboundarySystem, certificate: dict, B: MultiOp) -> bool:
    """Re-verify a certificate: the combination annihilates every δ-image and not B."""
    for img in system.images + [B]:
        tot = ZERO
        for eq in certificate["equations"]:
            key = (tuple(eq["sector"]), tuple(eq["orders"]))
            tot = tot + eq["weight"] * img.coeff(*key)
        if img is B:
            return not tot.is_zero()
        if not tot.is_zero():
            return False
    return False


@dataclass
class ClassDecomposition:
    residue: Dict[tuple, RatFunc]
    witness: MultiOp

    def is_zero(self) -> bool:
        return not self.residue


def class_decompose(B: MultiOp, shift=None) -> ClassDecomposition:
    """B = residue + δ(witness) with the residue supported off the pivot rows of δ.

    The pivot rows are fixed by the space alone, so residues of different 2-cochains
    in the same space are directly comparable: B is a coboundary iff its residue is 0.
    """
    level = 1 if B.arity == 3 else 0
    src = B.ins[-1]
    shift = (B.out - src).offset if shift is None else Fraction(shift)
    system = coboundary_system(src, shift, level)
    x, res = system.decompose(system.vector(B))
    return ClassDecomposition(res, system.from_solution(x))


# -- H^1 computations -----------------------------------------------------------

def cocycle_space(src: Weight, shift, F=None) -> List[MultiOp]:
    """A basis of Z^1 (kernel of δ on 1-cochains) as operators (coefficients lifted to Q(lam))."""
    system = coboundary_system(src, shift, 1)
    an = system.analysis(F)
    out = []
    for vec in an.kernel:
        out.append(system.from_solution([_lift(a) for a in vec]))
    return out


def _lift(a) -> RatFunc:
    if isinstance(a, RatFunc):
        return a
    if isinstance(a, Fraction) or isinstance(a, int):
        return RatFunc.const(a)
    return RatFunc(a.v)  # Residue


def kernel_cocycle(cid: CocycleId) -> MultiOp:
    """The unique-up-to-scale nontrivial cocycle at (src, shift), reduced modulo coboundaries.

    The representative has zero coefficients on the pivot coordinates of im δ0 and is
    scaled so that its first nonzero value-form coefficient (in sorted order) is 1.
    """
    F = _field_for(cid)
    src, shift = cid.src, cid.shift
    z1 = coboundary_system(src, shift, 1)
    b1 = coboundary_system(src, shift, 0)
    zan = z1.analysis(F if cid.validity == "special" and src.lam_coeff else None)
    conv = (lambda a: F.convert(a)) if F.name != "Q(lam)" else (lambda a: a)
    Z = zan.kernel
    # coboundary directions expressed in the same coordinates (z1.basis == b1 rows)
    assert z1.basis == b1.rows
    Bimg = [[conv(img.coeff(*key)) for key in b1.rows] for img in b1.images]
    bdim_an = analyze(Bimg, len(b1.rows), F) if Bimg else None
    brank = bdim_an.rank if bdim_an else 0
    # reduce Z modulo the coboundary span via RREF of [B; Z]
    rows = [r for r in Bimg] + [list(v) for v in Z]
    R, piv, _ = rref(rows, len(b1.rows), F)
    if len(piv) - brank != 1:
        raise ValueError(f"H^1 at {cid.name} has dimension {len(piv) - brank}, expected 1")
    Bred, bpiv, _ = rref(Bimg, len(b1.rows), F) if Bimg else ([], [], [])
    # pick a Z vector independent of the coboundaries and reduce it on the coboundary pivots
    for v in Z:
        w = list(v)
        for row, pc in zip(Bred, bpiv):
            c = w[pc]
            if not F.is_zero(c):
                w = [a - c * b for a, b in zip(w, row)]
        if any(not F.is_zero(a) for a in w):
            break
    else:
        raise ValueError("no cocycle independent of coboundaries")
    lead = next(a for a in w if not F.is_zero(a))
    w = [a / lead for a in w]
    return z1.from_solution([_lift(a) for a in w])


def h1_dimension(src: Weight, shift, F=None) -> int:
    """dim Z^1 - dim B^1 for 1-cochains F_{-1} x F_src -> F_{src+shift} over the field F."""
    z = coboundary_system(src, shift, 1).analysis(F)
    b = coboundary_system(src, shift, 0).analysis(F)
    return len(z.kernel) - b.rank


def h1_jump_loci(shift, src: Optional[Weight] = None) -> List[LamPoly]:
    """Irreducible q(lam) at whose roots dim H^1 differs from its generic value."""
    src = src or Weight.lam()
    generic = h1_dimension(src, shift)
    cand: List[LamPoly] = []
    for level in (0, 1):
        for f in divisor_factors(coboundary_system(src, shift, level).analysis().divisors):
            if all(f.c != g.c for g in cand):
                cand.append(f)
    out = []
    for q in sorted(cand, key=lambda f: (f.degree, f.c)):
        try:
            d = h1_dimension(src, shift, ResidueField(q))
        except Pole:
            out.append(q)
            continue
        if d != generic:
            out.append(q)
    return out


def verify_nontrivial_cocycle(name: Union[str, CocycleId], with_loci: bool = True) -> dict:
    """δγ = 0 and γ ∉ im δ0 for a catalog entry, with the loci where the verdict changes."""
    cid = name if isinstance(name, CocycleId) else cocycle_id(name)
    g = catalog(cid.name)
    dg = delta1(g)
    special_lam = cid.validity == "special" and cid.src.lam_coeff
    F = _field_for(cid) if special_lam else RatFuncField()
    if special_lam:
        cocycle = all(F.is_zero(F.convert(c)) for _, c in dg.items())
    else:
        cocycle = dg.is_zero()
    report = {"id": cid.name, "shift": _fstr(cid.shift), "parity": cid.parity,
              "source": cid.source, "validity": cid.validity, "cocycle": cocycle}
    if cid.locus is not None:
        report["locus"] = cid.locus_poly.render()
    system = coboundary_system(cid.src, cid.shift, 0)
    x, cert = solve_in_system(system, g, F if special_lam else None)
    report["trivial"] = x is not None
    if cert is not None:
        report["certificate"] = _cert_json(_certificate(system, cert))
    if special_lam and cocycle:
        # the printed formula is a cocycle only on the locus: record where δγ vanishes
        report["cocycle_locus"] = _cocycle_locus(dg)
    if with_loci and cid.validity == "generic" and x is None:
        report["exceptional_loci"] = [f.render() for f in exceptional_loci(system, g, cert)]
        report["h1_jump_loci"] = [f.render() for f in h1_jump_loci(cid.shift, cid.src)]
    return report


def _fstr(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _cocycle_locus(dg: MultiOp) -> List[str]:
    """Common irreducible factors of all numerators of δγ (where γ becomes a cocycle)."""
    from .scalars import poly_gcd
    g = None
    for _, c in dg.items():
        g = c.num if g is None else poly_gcd(g, c.num)
    if g is None or g.is_const():
        return []
    return [f.render() for f, _ in factor_poly(g)]


def exceptional_loci(system: CoboundarySystem, target: MultiOp, cert: dict) -> List[LamPoly]:
    """Irreducible factors q such that target becomes a coboundary at the roots of q.

    Candidates are the factors of the pivot minor of the selected rows and of the
    bordered minor given by the certificate row; each is decided exactly over Q[lam]/(q).
    """
    an = system.analysis()
    rhs = system.vector(target)
    cand = divisor_factors(an.divisors)
    bordered = [an.rows[i] + [rhs[i]] for i in an.selected] + [an.rows[cert["row"]] + [rhs[cert["row"]]]]
    _, _, divs = rref(bordered, an.n + 1, an.field)
    for f in divisor_factors(divs):
        if all(f.c != g.c for g in cand):
            cand.append(f)
    for _, c in target.items():
        for f in divisor_factors([c]):
            if all(f.c != g.c for g in cand):
                cand.append(f)
    out = []
    for q in sorted(cand, key=lambda f: (f.degree, f.c)):
        F = ResidueField(q)
        try:
            mat = [[F.convert(a) for a in row] for row in system.matrix]
            v = [F.convert(a) for a in rhs]
        except Pole:
            out.append(q)
            continue
        an_q = analyze(mat, len(system.basis), F)
        x, _ = an_q.solve(v)
        if x is not None:
            out.append(q)
    return out


__all__ = ["delta0", "delta1", "cup", "catalog", "cocycle_id", "catalog_ids", "CocycleId",
           "UnknownCocycle", "solve_coboundary", "class_decompose", "verify_nontrivial_cocycle",
           "Trivial", "TrivialOffLocus", "NonTrivial", "coboundary_system", "generic_cocycle",
           "cochain1_space", "cochain2_space", "linop_space", "kernel_cocycle", "printed_cocycle",
           "h1_dimension", "h1_jump_loci"]
