"""Formal deformations of the module of symbols S^n_delta = sum_k F_{delta-k/2}.

rho = L + L1 + L2 + ... with L_s = sum over parameter monomials M of degree s of
M * C_M, C_M a 1-cochain of the parity of M.  The homomorphism condition at
order s reads  delta(L_s) = Q_s  with

    Q_s = sum_{i+j=s} sum_{M in L_i, N in L_j} (-1)^{p(M)p(N)} M N [[C_M, C_N]],

parameters always written to the left in canonical order.  Each block (source
weight mu, shift k) of Q_s is split by ``class_decompose`` into a residue and a
coboundary; residue coordinates give the relations, the coboundary gives L_s.

For weights of the form lam + c every block is computed once at source lam and
transported by lam -> lam + c.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .bilinops import MultiOp
from .cohomology import (GENERIC_SHIFTS, catalog, class_decompose, cochain1_space, cup, delta1,
                         generic_cocycle)
from .densities import Weight
from .params import (Monomial, ParamName, ParamPoly, Provenance, RelationIdeal, echelon, monomial_parity,
                     normalize_monomial)
from .scalars import ONE, ZERO, RatFunc
from .transvectants import TransvectantSpec, transvectant

log = logging.getLogger(__name__)

LAM = Weight.lam()
MAX_ORDER = 4

Part = Dict[Monomial, MultiOp]


def _f(q) -> Fraction:
    return Fraction(q)


def fstr(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class SymbolModule:
    delta: Weight
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("module size n must be nonnegative")

    @property
    def weights(self) -> List[Weight]:
        return [self.delta - Fraction(k, 2) for k in range(self.n + 1)]

    @property
    def bottom(self) -> Weight:
        return self.delta - Fraction(self.n, 2)

    def contains(self, w: Weight) -> bool:
        return w in self.weights

    def blocks(self, k) -> List[Weight]:
        """Sources mu with mu and mu+k both in the module."""
        k = Fraction(k)
        return [w for w in reversed(self.weights) if self.contains(w + k)]

    def render(self) -> str:
        return f"S^{self.n}_{{{self.delta.render()}}}"


def window_label(k, n: int) -> str:
    return f"2(delta-lambda) in {{{fstr(2 * Fraction(k))}..{n}}}"


# -- parts ---------------------------------------------------------------------------

def _shift_part(part: Part, c: Fraction) -> Part:
    out: Part = {}
    for m, op in part.items():
        s, mm = normalize_monomial([p.shift_lam(c) for p in m])
        out[mm] = op.shift_lam(c) if s == 1 else op.shift_lam(c).scale(-1)
    return out


def _add_to(part: Part, m: Monomial, op: MultiOp) -> None:
    if m in part:
        v = part[m] + op
        if v.is_zero():
            del part[m]
        else:
            part[m] = v
    elif not op.is_zero():
        part[m] = op


def part_to_polys(part: Part) -> Dict[tuple, ParamPoly]:
    """Coordinate-wise view: value-form key -> parameter polynomial."""
    out: Dict[tuple, ParamPoly] = {}
    for m, op in part.items():
        for key, c in op.items():
            out.setdefault(key, ParamPoly())._add(m, c)
    return out


def polys_to_part(polys: Dict[tuple, ParamPoly], space: MultiOp) -> Part:
    part: Part = {}
    for key, p in polys.items():
        for m, c in p.terms.items():
            if m not in part:
                part[m] = space.copy_empty()
            part[m].add_term(key[0], key[1], c)
    return {m: op for m, op in part.items() if not op.is_zero()}


def transvectant_witness(B: MultiOp, k) -> Optional[RatFunc]:
    """c with B = c * delta(J^{-1,src}_{k+1}), or None."""
    src = B.ins[-1]
    J = transvectant(TransvectantSpec(Weight.const(-1), src, Fraction(k) + 1))
    dJ = delta1(J)
    ratio = None
    for key, c in B.items():
        d = dJ.coeff(*key)
        if d.is_zero():
            return None
        r = c / d
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    if ratio is None:
        return None
    if any(B.coeff(*key).is_zero() for key, _ in dJ.items()):
        return None
    return ratio


# -- the engine ----------------------------------------------------------------------

@dataclass
class BlockResult:
    order: int
    src: Weight
    shift: Fraction
    relations: List[ParamPoly]
    part: Part
    residue_dim: int
    witness_factor: Optional[ParamPoly] = None
    residues: Dict[Monomial, Dict[tuple, RatFunc]] = field(default_factory=dict)
    Q: Part = field(default_factory=dict)

    def shifted(self, c: Fraction) -> "BlockResult":
        return BlockResult(self.order, self.src + c * self.src.lam_coeff, self.shift,
                           [r.shift_lam(c) for r in self.relations], _shift_part(self.part, c),
                           self.residue_dim, self.witness_factor.shift_lam(c) if self.witness_factor else None)


class Engine:
    """Blocks of the Maurer-Cartan hierarchy, memoized by (order, source, shift).

    ``generic`` engines compute at source lam and transport; weights must be lam + const.
    """

    def __init__(self, mode: str = "generic", max_order: int = MAX_ORDER):
        if mode not in ("generic", "full"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.max_order = max_order
        self._blocks: Dict[tuple, BlockResult] = {}
        self._shifts: Dict[int, List[Fraction]] = {1: list(GENERIC_SHIFTS)}

    # shifts that can carry a nonzero part at a given order
    def shifts(self, order: int) -> List[Fraction]:
        if order not in self._shifts:
            out = set()
            for i in range(1, order):
                for a in self.shifts(i):
                    for b in self.shifts(order - i):
                        out.add(a + b)
            self._shifts[order] = sorted(out)
        return self._shifts[order]

    def l1_part(self, src: Weight, a: Fraction) -> Part:
        a = Fraction(a)
        if a not in GENERIC_SHIFTS:
            return {}
        if src.lam_coeff == 1:
            g = generic_cocycle(a, src)
        else:
            g = generic_cocycle(a).specialize(src.offset)
        return {(ParamName(src, src + a),): g}

    def part(self, order: int, src: Weight, a: Fraction) -> Part:
        if order == 1:
            return self.l1_part(src, a)
        return self.block(order, src, a).part

    def block(self, order: int, src: Weight, k) -> BlockResult:
        k = Fraction(k)
        key = (order, src, k)
        if key in self._blocks:
            return self._blocks[key]
        if src.lam_coeff == 1 and src != LAM:
            res = self.block(order, LAM, k).shifted(src.offset)
        else:
            res = self._compute(order, src, k)
        self._blocks[key] = res
        return res

    def assemble(self, order: int, src: Weight, k: Fraction) -> Part:
        """The block of Q_order at (src, k) as monomial -> 2-cochain."""
        Q: Part = {}
        for i in range(1, order):
            j = order - i
            for b in self.shifts(j):
                a = k - b
                if a < 0 or a not in self.shifts(i):
                    continue
                inner = self.part(j, src, b)
                if not inner:
                    continue
                outer = self.part(i, src + b, a)
                for M, CM in outer.items():
                    for N, CN in inner.items():
                        s, mono = normalize_monomial(M + N)
                        if s == 0:
                            continue
                        if monomial_parity(M) and monomial_parity(N):
                            s = -s
                        c = cup(CM, CN)
                        _add_to(Q, mono, c if s == 1 else c.scale(-1))
        return Q

    def window_ideal(self, order: int, src: Weight, k: Fraction) -> RelationIdeal:
        """Relations of order < ``order`` from all blocks inside [src, src+k]."""
        R = RelationIdeal()
        for s in range(2, order):
            for kk in self.shifts(s):
                c = Fraction(0)
                while c + kk <= k:
                    for r in self.block(s, src + c, kk).relations:
                        _raw_add(R, r, Provenance(s, kk, ""))
                    c += Fraction(1, 2)
        return R

    def _compute(self, order: int, src: Weight, k: Fraction) -> BlockResult:
        log.debug("block order=%d src=%s shift=%s", order, src, k)
        Q = self.assemble(order, src, k)
        Q = {m: op for m, op in Q.items() if not op.is_zero()}
        if not Q:
            return BlockResult(order, src, k, [], {}, 0, Q=Q)
        lower = self.window_ideal(order, src, k)
        # transvectant witnesses when every monomial's cochain is a multiple of delta J
        factors = {m: transvectant_witness(op, k) for m, op in Q.items()}
        witness_factor = None
        residues: Dict[Monomial, Dict[tuple, RatFunc]] = {}
        part: Part = {}
        if all(f is not None for f in factors.values()):
            J = transvectant(TransvectantSpec(Weight.const(-1), src, k + 1))
            witness_factor = ParamPoly({m: f for m, f in factors.items()})
            for m, f in factors.items():
                part[m] = J.scale(f)
            relations: List[ParamPoly] = []
            rdim = 0
        else:
            for m, op in Q.items():
                cd = class_decompose(op, k)
                residues[m] = cd.residue
                if not cd.witness.is_zero():
                    part[m] = cd.witness
            keys = sorted({key for r in residues.values() for key in r}, key=repr)
            rdim = len(keys)
            raw = []
            for key in keys:
                p = ParamPoly()
                for m, r in residues.items():
                    if key in r:
                        p._add(m, r[key])
                raw.append(p)
            relations = []
            for p in echelon(raw):
                q = lower.reduce(p) if len(lower) else p
                if not q.is_zero():
                    relations.append(q)
            relations = [r.monic() for r in echelon(relations)]
            relations = [_canonical_sign(r) for r in relations]
        res = BlockResult(order, src, k, relations, {}, rdim, witness_factor, residues, Q)
        # reduce L_s modulo everything known in this window (relations of this block included)
        full = self.window_ideal(order, src, k)
        for r in relations:
            _raw_add(full, r, Provenance(order, k, ""))
        if len(full) and part:
            space = cochain1_space(src, k)
            polys = {key: full.reduce(p) for key, p in part_to_polys(part).items()}
            part = polys_to_part({kk: p for kk, p in polys.items() if not p.is_zero()}, space)
        res.part = part
        return res


def _raw_add(R: RelationIdeal, g: ParamPoly, prov: Provenance) -> None:
    R.generators.append(g)
    R.provenance.append(prov)
    for p in g.params():
        if p not in R.universe:
            R.universe.append(p)
    R._components.clear()


def _canonical_sign(p: ParamPoly) -> ParamPoly:
    """Scale so that the monomial whose outer factor has the smallest source has coefficient 1."""
    if p.is_zero():
        return p
    m = max(p.terms, key=lambda mono: [q.sort_key() for q in mono])
    return p.scale(ONE / p.terms[m])


# -- state and pipeline -----------------------------------------------------------------

@dataclass
class ObstructionReport:
    shift: Fraction
    order: int
    src: Weight
    residue_dim: int
    relations: List[ParamPoly]
    witness_factor: Optional[ParamPoly] = None

    def as_dict(self) -> dict:
        d = {"order": self.order, "shift": fstr(self.shift), "src": self.src.render(),
             "residue_dim": self.residue_dim, "relations": [r.render() for r in self.relations]}
        if self.witness_factor is not None:
            d["witness_factor"] = self.witness_factor.render()
        return d


@dataclass
class DeformationState:
    module: SymbolModule
    mode: str = "generic"
    L1: Dict[ParamName, MultiOp] = field(default_factory=dict)
    L2: Dict[Monomial, MultiOp] = field(default_factory=dict)
    L: Dict[int, Dict[Tuple[Weight, Fraction], Part]] = field(default_factory=dict)
    relations: RelationIdeal = field(default_factory=RelationIdeal)
    order_closed: int = 1
    reports: List[ObstructionReport] = field(default_factory=list)
    engine: Optional[Engine] = None

    def parameters(self) -> List[ParamName]:
        return sorted(self.L1, key=ParamName.sort_key)


_ENGINES: Dict[str, Engine] = {}


def get_engine(mode: str = "generic") -> Engine:
    if mode not in _ENGINES:
        _ENGINES[mode] = Engine(mode)
    return _ENGINES[mode]


def build_infinitesimal(module: SymbolModule, mode: str = "generic") -> DeformationState:
    if module.delta.lam_coeff not in (0, 1):
        raise ValueError("weights must be lam + const or constants")
    eng = get_engine(mode)
    st = DeformationState(module, mode, engine=eng)
    st.L[1] = {}
    for a in GENERIC_SHIFTS:
        for w in module.blocks(a):
            part = eng.part(1, w, a)
            st.L[1][(w, a)] = part
            for m, op in part.items():
                st.L1[m[0]] = op
    if mode == "full":
        _add_special(st)
    return st


def _add_special(st: DeformationState) -> None:
    """Special-weight generators (full mode, constant weights only; experimental)."""
    from .cohomology import catalog_ids
    for cid in catalog_ids():
        if cid.validity != "special" or cid.src.lam_coeff:
            continue
        if st.module.contains(cid.src) and st.module.contains(cid.src + cid.shift):
            variant = "tilde" if cid.name.startswith("gammat") else "plain"
            p = ParamName(cid.src, cid.src + cid.shift, variant)
            st.L1[p] = catalog(cid.name)


def _run_order(st: DeformationState, order: int) -> DeformationState:
    if st.order_closed >= order:
        return st
    if st.order_closed != order - 1:
        raise ValueError(f"order {order - 1} must be closed first")
    if st.module.delta.lam_coeff != 1:
        raise NotImplementedError("higher orders are implemented for weights lam + const")
    eng = st.engine or get_engine(st.mode)
    st.L[order] = {}
    n = st.module.n
    for k in eng.shifts(order):
        if 2 * k > n:
            continue
        for w in st.module.blocks(k):
            br = eng.block(order, w, k)
            if br.part:
                st.L[order][(w, k)] = br.part
                if order == 2:
                    for m, op in br.part.items():
                        st.L2[m] = op
            if br.relations or br.witness_factor is not None or br.residue_dim:
                st.reports.append(ObstructionReport(k, order, w, br.residue_dim, br.relations, br.witness_factor))
            for r in br.relations:
                _raw_add(st.relations, r, Provenance(order, k, window_label(k, n), block=w.render()))
    st.order_closed = order
    return st


def second_order(st: DeformationState) -> DeformationState:
    return _run_order(st, 2)


def third_order(st: DeformationState) -> DeformationState:
    return _run_order(st, 3)


def fourth_order(st: DeformationState) -> DeformationState:
    return _run_order(st, 4)


def run(module: SymbolModule, order: int = 4, mode: str = "generic") -> DeformationState:
    st = build_infinitesimal(module, mode)
    for s in range(2, order + 1):
        _run_order(st, s)
    return st


def emit_ideal(st: DeformationState) -> RelationIdeal:
    """Generators sorted by (order, shift, source) and deduplicated up to scalars."""
    items = sorted(zip(st.relations.generators, st.relations.provenance),
                   key=lambda gp: (gp[1].order, gp[1].shift, gp[1].block, gp[0].render()))
    out = RelationIdeal()
    seen = set()
    for g, pr in items:
        key = g.monic().render()
        if key in seen:
            continue
        seen.add(key)
        _raw_add(out, g, pr)
    return out


# -- homomorphism defect (independent evaluation) ------------------------------------------

Vector = Dict[Tuple[Weight, Monomial], "object"]


def _act(st: DeformationState, G, vec: dict, max_deg: int) -> dict:
    """rho(G) applied to a parameter-valued module vector {(weight, monomial): SuperPoly}."""
    from .densities import lie_density
    out: dict = {}

    def put(w, m, sign, poly):
        if sign == 0 or poly.is_zero():
            return
        key = (w, m)
        poly = poly if sign == 1 else -poly
        out[key] = out[key] + poly if key in out else poly

    pG = G.require_homogeneous()
    for (w, m), f in vec.items():
        pm = monomial_parity(m)
        sign = -1 if (pG and pm) else 1
        put(w, m, sign, lie_density(G, f, w.as_ratfunc()))
        for s in range(1, max_deg - len(m) + 1):
            for (src, k), part in st.L.get(s, {}).items():
                if src != w:
                    continue
                for M, C in part.items():
                    pc = C.parity
                    sg = -1 if ((pG + pc) * pm) % 2 else 1
                    s2, mono = normalize_monomial(M + m)
                    if s2 == 0:
                        continue
                    put(src + k, mono, sg * s2, C.apply(G, f))
    return {k: v for k, v in out.items() if not v.is_zero()}


def homomorphism_defect(st: DeformationState, degree: int = 6, order: int = 2,
                        fdegree: int = 6) -> Tuple[bool, Optional[dict]]:
    """rho({G,H}) - [rho(G), rho(H)] on basis pairs and module monomials, mod relations and degree > order."""
    from .contact import contact_bracket
    from .superspace import SuperPoly
    basis = [SuperPoly.monomial(p, d) for d in range(degree + 1) for p in (0, 1)]
    R = st.relations
    for i, G in enumerate(basis):
        for H in basis[i:]:
            pG, pH = G.parity, H.parity
            GH = contact_bracket(G, H)
            for w in st.module.weights:
                for pf in (0, 1):
                    for d in range(fdegree + 1):
                        v = {(w, ()): SuperPoly.monomial(pf, d)}
                        lhs = _act(st, GH, v, order) if not GH.is_zero() else {}
                        a = _act(st, G, _act(st, H, v, order), order)
                        b = _act(st, H, _act(st, G, v, order), order)
                        tot: dict = {}
                        for dct, sgn in ((lhs, 1), (a, -1), (b, -1 if (pG * pH) % 2 else 1)):
                            for key, poly in dct.items():
                                if len(key[1]) > order:
                                    continue
                                poly = poly if sgn == 1 else -poly
                                tot[key] = tot[key] + poly if key in tot else poly
                        bad = _defect_mod(tot, R)
                        if bad is not None:
                            return False, {"G": G.render(), "H": H.render(), "F": v[(w, ())].render(),
                                           "weight": w.render(), "defect": bad}
    return True, None


def _defect_mod(tot: dict, R: RelationIdeal) -> Optional[str]:
    # collect coefficients of each (weight, x-monomial) as parameter polynomials
    polys: Dict[tuple, ParamPoly] = {}
    for (w, m), poly in tot.items():
        for eps, part in ((0, poly.f0), (1, poly.f1)):
            for deg, c in part.items():
                polys.setdefault((w, eps, deg), ParamPoly())._add(m, c)
    for key, p in polys.items():
        if p.is_zero():
            continue
        q = R.reduce(p) if len(R) else p
        if not q.is_zero():
            return f"{key[0].render()} th^{key[1]} x^{key[2]}: {q.render()}"
    return None


# -- scenarios -----------------------------------------------------------------------------

EXAMPLES = {
    "n0": (Weight.lam(), 0),
    "n1": (Weight.lam() + 1, 1),
    "n3": (Weight.lam() + 3, 3),
    "n4": (Weight.lam() + 4, 4),
}


def example_module(which: str) -> SymbolModule:
    if which not in EXAMPLES:
        raise KeyError(which)
    d, n = EXAMPLES[which]
    return SymbolModule(d, n)


def expected_example(which: str) -> List[ParamPoly]:
    """The displayed relation sets of the worked examples, transcribed as printed."""
    L = Weight.lam()

    def t(a, b):
        return ParamName(L + Fraction(a), L + Fraction(b))

    def mono(*ps):
        return ParamPoly.monomial(ps)

    if which in ("n0", "n1"):
        return []
    if which == "n3":
        return [mono(t(3, 3), t(Fraction(3, 2), 3))]
    if which == "n4":
        out = []
        for mu in (Fraction(2), Fraction(5, 2)):
            out.append(mono(t(mu, mu + Fraction(3, 2)), t(mu, mu))
                       - mono(t(mu + Fraction(3, 2), mu + Fraction(3, 2)), t(mu, mu + Fraction(3, 2))))
        mu = Fraction(2)
        out.append(mono(t(mu, mu + 2), t(mu, mu)))
        out.append(mono(t(mu + 2, mu + 2), t(mu, mu + 2)))
        return out
    raise KeyError(which)


# -- second-order obstruction blocks B_{lam,lam+k} -------------------------------------------

OBSTRUCTION_SHIFTS = tuple(Fraction(k, 2) for k in range(3, 11))


def _rf(num: Sequence, den: Sequence) -> RatFunc:
    from .scalars import LamPoly
    out_n, out_d = LamPoly.const(1), LamPoly.const(1)
    for f in num:
        out_n = out_n * LamPoly(f)
    for f in den:
        out_d = out_d * LamPoly(f)
    return RatFunc(out_n, out_d)


def printed_factors() -> Dict[Fraction, Tuple[ParamPoly, RatFunc]]:
    """Displayed witness factors: k -> (parameter pattern, scalar) with B = scalar * pattern * delta J."""
    h = Fraction(1, 2)
    psi = _rf([(0, 2), (1, 2)], [(3, 2)])
    alpha = _rf([(-3,), (1, 1), (1, 2)], [(5,), (4, 2), (2, 7, 2)])
    nu = _rf([(-5,), (4, 1)], [(0, 1), (1, 1), (1, 2)])
    return {7 * h: (_Tp(0), psi), Fraction(4): (_T4(0), alpha), 9 * h: (_Tq(0).scale(RatFunc.const(-1)), nu)}


def unit_block(k) -> MultiOp:
    """B_{lam,lam+k} with every parameter set to 1."""
    br = get_engine().block(2, LAM, Fraction(k))
    out = None
    for _, op in sorted(br.Q.items(), key=lambda kv: [q.sort_key() for q in kv[0]]):
        out = op if out is None else out + op
    return out


def engine_factor(k) -> Optional[RatFunc]:
    """The computed witness scalar relative to the displayed parameter pattern at shift k."""
    k = Fraction(k)
    br = get_engine().block(2, LAM, k)
    if br.witness_factor is None or k not in printed_factors():
        return None
    pattern = printed_factors()[k][0]
    m0 = min(pattern.terms, key=lambda m: [q.sort_key() for q in m])
    return br.witness_factor.coeff(m0) / pattern.coeff(m0)


def obstruction_summary(k) -> dict:
    """Verdict for the second-order block at (lam, k), with factor or certificates.

    Each parameter monomial multiplies its own 2-cochain; the block is nontrivial
    when one of them is.  The unit-parameter sum is reported too, but it cancels
    whenever the parameters enter as a difference.
    """
    from .cohomology import solve_coboundary
    k = Fraction(k)
    if k not in OBSTRUCTION_SHIFTS:
        raise ValueError(f"shift {k} outside 3/2..5")
    br = get_engine().block(2, LAM, k)
    monos = sorted(br.Q, key=lambda m: [q.sort_key() for q in m])
    d: dict = {"shift": fstr(k), "block": f"B[lam,lam+{fstr(k)}]"}
    per = []
    nontrivial = False
    for m in monos:
        res = solve_coboundary(br.Q[m])
        nontrivial |= res.kind == "nontrivial"
        per.append(dict(monomial=ParamPoly.monomial(m).render(), **res.as_dict()))
    d["verdict"] = "nontrivial" if nontrivial else "trivial"
    d["monomials"] = per
    B = unit_block(k)
    d["unit_sum_zero"] = B is None or B.is_zero()
    d["relations"] = [r.render() for r in br.relations]
    if br.witness_factor is not None:
        d["witness_factor"] = br.witness_factor.render()
    if k in printed_factors():
        pattern, printed = printed_factors()[k]
        d["printed_factor"] = printed.render()
        d["printed_pattern"] = pattern.render()
        engine = engine_factor(k)
        if engine is not None:
            d["factor"] = engine.render()
            d["pattern_matches"] = (br.witness_factor - pattern.scale(engine)).is_zero()
            d["factor_matches"] = engine == printed
            if not d["factor_matches"] and not engine.is_zero():
                d["factor_ratio"] = (engine / printed).render()
    return d


# -- printed integrability conditions -------------------------------------------------------

def _t(a, b) -> ParamPoly:
    return ParamPoly.param(ParamName(LAM + Fraction(a), LAM + Fraction(b)))


def _T(*pairs, coeffs=None) -> ParamPoly:
    """sum_i c_i t(b_i, c_i) t(a_i, b_i) for pairs ((a, b, c), ...)."""
    out = ParamPoly()
    for i, (a, b, c) in enumerate(pairs):
        term = _t(b, c) * _t(a, b)
        cf = coeffs[i] if coeffs else 1
        out = out + term.scale(RatFunc.const(Fraction(cf)))
    return out


def _Tp(c):  # T' pattern shifted by c: chains c -> c+3/2 -> c+7/2 minus c -> c+2 -> c+7/2
    h = Fraction(c)
    return _T((h, h + Fraction(3, 2), h + Fraction(7, 2)), (h, h + 2, h + Fraction(7, 2)), coeffs=(1, -1))


def _Tq(c):  # chains c -> c+5/2 -> c+9/2 minus c -> c+2 -> c+9/2
    h = Fraction(c)
    return _T((h, h + Fraction(5, 2), h + Fraction(9, 2)), (h, h + 2, h + Fraction(9, 2)), coeffs=(1, -1))


def _T4(c):  # the 1/3-weighted combination ending at c+4
    h = Fraction(c)
    return _T((h, h + Fraction(3, 2), h + 4), (h, h + Fraction(5, 2), h + 4), (h, h + 2, h + 4),
              coeffs=(1, 1, Fraction(1, 3)))


def _d(a) -> ParamPoly:
    return _t(a, a)


def printed_conditions() -> List[Tuple[int, int, List[ParamPoly]]]:
    """Integrability conditions as printed: (number, smallest 2(delta-lam), relations).

    "x = y = 0" is transcribed as the two relations x and y.  Condition 6 is kept
    with its duplicated term; see ``condition_readings`` for the repaired reading.
    """
    h = Fraction(1, 2)
    t = _t
    c = []
    c.append((1, 3, [t(0, 3 * h) * _d(0) - _d(3 * h) * t(0, 3 * h)]))
    c.append((2, 4, [t(0, 2) * _d(0), _d(2) * t(0, 2)]))
    c.append((3, 5, [t(0, 5 * h) * _d(0), _d(5 * h) * t(0, 5 * h)]))
    c.append((4, 6, [t(3 * h, 3) * t(0, 3 * h)]))
    c.append((5, 7, [_d(7 * h) * _Tp(0), _Tp(0) * _d(0)]))
    dup = _T((0, 5 * h, 4), (0, 5 * h, 4), (0, 2, 4), coeffs=(1, 1, Fraction(1, 3)))
    c.append((6, 8, [_d(4) * _T4(0), dup * _d(0)]))
    c.append((7, 9, [_d(9 * h) * _Tq(0).scale(RatFunc.const(-1)), _Tq(0).scale(RatFunc.const(-1)) * _d(0)]))
    c.append((8, 10, [t(0, 5 * h) * t(5 * h, 5), t(7 * h, 5) * _Tp(0),
                      (t(3, 5) * t(3 * h, 3) - t(7 * h, 5) * t(3 * h, 7 * h)) * t(0, 3 * h)]))
    c.append((9, 11, [t(4, 11 * h) * _T4(0),
                      _T((3 * h, 3, 11 * h), (3 * h, 4, 11 * h), (3 * h, 7 * h, 11 * h),
                         coeffs=(1, 1, Fraction(1, 3))) * t(0, 3 * h),
                      t(7 * h, 11 * h) * _Tp(0),
                      (t(7 * h, 11 * h) * t(2, 7 * h) - t(4, 11 * h) * t(2, 4)) * t(0, 2)]))
    c.append((10, 12, [t(9 * h, 6) * _Tq(0),
                       (t(4, 6) * t(3 * h, 4) - t(7 * h, 6) * t(3 * h, 7 * h)) * t(0, 3 * h),
                       t(4, 6) * _T4(0),
                       _T((2, 7 * h, 6), (2, 9 * h, 6), (2, 4, 6), coeffs=(1, 1, Fraction(1, 3))) * t(0, 2),
                       t(7 * h, 6) * _Tp(0),
                       (t(4, 6) * t(5 * h, 4) - t(9 * h, 6) * t(5 * h, 9 * h)) * t(0, 5 * h)]))
    c.append((11, 13, [t(4, 13 * h) * _T4(0),
                       _T((5 * h, 4, 13 * h), (5 * h, 5, 13 * h), (5 * h, 9 * h, 13 * h),
                          coeffs=(1, 1, Fraction(1, 3))) * t(0, 5 * h),
                       t(9 * h, 13 * h) * _Tq(0),
                       (t(9 * h, 13 * h) * t(2, 9 * h) - t(4, 13 * h) * t(2, 4)) * t(0, 2)]))
    c.append((12, 14, [t(9 * h, 7) * _Tq(0),
                       (t(5, 7) * t(5 * h, 5) - t(9 * h, 7) * t(5 * h, 9 * h)) * t(0, 5 * h),
                       _Tp(0) * (t(5, 7) * t(7 * h, 5) - t(11 * h, 7) * t(7 * h, 11 * h))]))
    c.append((13, 15, [(t(11 * h, 15 * h) * t(4, 11 * h) - t(6, 15 * h) * t(4, 6)) * _T4(0),
                       _Tp(0) * _T((7 * h, 5, 15 * h), (7 * h, 6, 15 * h), (7 * h, 11 * h, 15 * h),
                                   coeffs=(1, 1, Fraction(1, 3)))]))
    c.append((14, 16, [_T4(4) * _T4(0),
                       (t(6, 8) * t(9 * h, 6) - t(13 * h, 8) * t(9 * h, 13 * h)) * _Tq(0),
                       _Tp(0) * (t(6, 8) * t(7 * h, 6) - t(11 * h, 8) * t(7 * h, 11 * h))]))
    c.append((15, 17, [_T4(0) * (t(13 * h, 17 * h) * t(4, 13 * h) - t(6, 17 * h) * t(4, 6)),
                       _T((9 * h, 6, 17 * h), (9 * h, 7, 17 * h), (9 * h, 13 * h, 17 * h),
                          coeffs=(1, 1, Fraction(1, 3))) * _Tq(0)]))
    c.append((16, 18, [(t(7, 9) * t(9 * h, 7) - t(13 * h, 9) * t(9 * h, 13 * h)) * _Tq(0)]))
    return c


def condition_readings() -> Dict[Tuple[int, int], ParamPoly]:
    """Repaired readings of printed relations that are evidently misprinted, keyed (condition, index)."""
    return {(6, 1): _T4(0) * _d(0)}


@dataclass
class ConditionMatch:
    number: int
    index: int
    window_start: int
    printed: ParamPoly
    status: str  # "verbatim", "in_ideal", "reading_in_ideal", "absent"
    engine: List[ParamPoly] = field(default_factory=list)
    reading: Optional[ParamPoly] = None

    def as_dict(self) -> dict:
        d = {"condition": self.number, "index": self.index, "window": f"2(delta-lambda) in {{{self.window_start}..n}}",
             "printed": self.printed.render(), "status": self.status,
             "engine": [p.render() for p in self.engine]}
        if self.reading is not None:
            d["reading"] = self.reading.render()
        return d


def _transport(p: ParamPoly) -> Fraction:
    return max(q.dst.offset for q in p.params()) - min(q.src.offset for q in p.params())


def compare_conditions(st: DeformationState, upto: Optional[int] = None) -> List[ConditionMatch]:
    """Match each printed relation against the emitted ideal of ``st`` (source lam)."""
    R = emit_ideal(st)
    keys = {g.monic().render() for g in R.generators}
    readings = condition_readings()
    out = []
    for num, start, rels in printed_conditions():
        if upto is not None and num > upto:
            continue
        if start > st.module.n:
            continue
        for i, r in enumerate(rels):
            order, shift = r.degree(), _transport(r)
            engine = [g for g, pr in zip(R.generators, R.provenance)
                      if pr.order == order and pr.shift == shift and pr.block == LAM.render()]
            reading = readings.get((num, i))
            if r.monic().render() in keys:
                status = "verbatim"
            elif R.contains(r):
                status = "in_ideal"
            elif reading is not None and R.contains(reading):
                status = "reading_in_ideal"
            else:
                status = "absent"
            out.append(ConditionMatch(num, i, start, r, status, engine, reading))
    return out


__all__ = ["SymbolModule", "DeformationState", "ObstructionReport", "Engine", "build_infinitesimal",
           "second_order", "third_order", "fourth_order", "emit_ideal", "run", "homomorphism_defect",
           "example_module", "expected_example", "printed_conditions",
           "condition_readings", "compare_conditions", "ConditionMatch",
           "obstruction_summary", "engine_factor", "printed_factors", "unit_block", "OBSTRUCTION_SHIFTS", "window_label", "transvectant_witness", "get_engine"]
