"""Command-line driver.  Reports go to stdout, diagnostics to stderr.

Exit codes: 0 when every check passes, 2 on a verification failure or
mismatch, 1 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

SCHEMA = 1
DEFAULT_SEED = 20240611

log = logging.getLogger("superdeform")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    degree_cap: int = 8
    mode: str = "generic"
    output: str = "text"
    seed: int = DEFAULT_SEED
    threads: int = 1

    def __post_init__(self):
        if self.degree_cap < 4:
            raise UsageError("--degree-cap must be at least 4")
        if self.mode not in ("generic", "full"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.output not in ("text", "json"):
            raise UsageError(f"unknown output format {self.output!r}")


def _threads_from_env() -> int:
    raw = os.environ.get("SUPERDEFORM_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"SUPERDEFORM_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("SUPERDEFORM_THREADS must be positive")
    return n


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {s!r}") from None


def _half(s: str) -> Fraction:
    q = _frac(s)
    if (2 * q).denominator != 1:
        raise UsageError(f"{s} is not a half-integer")
    return q


def _read_expr(s: str) -> str:
    # "@path" reads the expression from a file
    if s.startswith("@"):
        try:
            with open(s[1:], encoding="utf-8") as fh:
                return fh.read()
        except OSError as e:
            raise UsageError(str(e)) from None
    return s


def _weight(s: str):
    from .exprparse import SyntaxError as ParseError, TypeMismatch, parse_value
    try:
        return parse_value(_read_expr(s), "weight")
    except (ParseError, TypeMismatch) as e:
        raise UsageError(f"bad weight {s!r}: {e}") from None


# -- commands ----------------------------------------------------------------------

Result = Dict[str, object]


def cmd_verify(args, cfg: RunConfig) -> Result:
    target = args.target
    if target == "bracket":
        from .contact import check_super_antisymmetry, check_super_jacobi
        jac = check_super_jacobi(cfg.degree_cap)
        anti = check_super_antisymmetry(cfg.degree_cap)
        return {"ok": jac.ok and anti.ok, "target": "bracket", "degree_cap": cfg.degree_cap,
                "jacobi": jac.as_dict(), "antisymmetry": anti.as_dict()}
    if target == "action":
        from .densities import Weight, check_representation
        w = _weight(args.arg) if args.arg else Weight.lam()
        rep = check_representation(cfg.degree_cap, w)
        return {"ok": rep.ok, "target": "action", "weight": w.render(), "degree_cap": cfg.degree_cap,
                "representation": rep.as_dict()}
    if target == "cocycle":
        from .cohomology import UnknownCocycle, verify_nontrivial_cocycle
        if not args.arg:
            raise UsageError("verify cocycle needs an id (see `cocycles list`)")
        try:
            rep = verify_nontrivial_cocycle(args.arg)
        except UnknownCocycle:
            raise UsageError(f"unknown cocycle {args.arg!r}") from None
        return dict(ok=bool(rep["cocycle"]) and not rep["trivial"], target="cocycle", **rep)
    if target == "transvectant":
        from .densities import Weight
        from .transvectants import TransvectantSpec, check_osp_invariance
        if not args.arg:
            raise UsageError("verify transvectant needs k")
        k = _half(args.arg)
        alpha = _weight(args.alpha) if args.alpha is not None else Weight.lam()
        beta = _weight(args.beta) if args.beta is not None else Weight.lam()
        spec = TransvectantSpec(alpha, beta, k)
        rep = check_osp_invariance(spec, cfg.degree_cap, table=args.table)
        return {"ok": rep.ok, "target": "transvectant", "k": str(k), "alpha": alpha.render(),
                "beta": beta.render(), "table": args.table, "degree_cap": cfg.degree_cap,
                "invariance": rep.as_dict()}
    raise UsageError(f"unknown verify target {target!r}")


def cmd_cocycles(args, cfg: RunConfig) -> Result:
    from .cohomology import catalog_ids
    rows = [{"id": c.name, "src": c.src.render(), "shift": str(c.shift), "parity": c.parity,
             "validity": c.validity, "source": c.source,
             **({"locus": c.locus_poly.render()} if c.locus is not None else {})}
            for c in catalog_ids()]
    return {"ok": True, "cocycles": rows}


def cmd_cup(args, cfg: RunConfig) -> Result:
    from .cohomology import UnknownCocycle, catalog, cup, delta1, solve_coboundary
    try:
        g1, g2 = catalog(args.first), catalog(args.second)
    except UnknownCocycle as e:
        raise UsageError(f"unknown cocycle {e}") from None
    if g1.ins[-1] != g2.out:
        raise UsageError(f"{args.first} does not compose with {args.second}: source "
                         f"{g1.ins[-1].render()} vs target {g2.out.render()}")
    c = cup(g1, g2)
    res = solve_coboundary(c)
    return {"ok": delta1(c).is_zero(), "first": args.first, "second": args.second,
            "cocycle": delta1(c).is_zero(), "zero": c.is_zero(), **res.as_dict()}


def cmd_obstruct(args, cfg: RunConfig) -> Result:
    from .deformation import OBSTRUCTION_SHIFTS, obstruction_summary
    k = _half(args.k)
    if k not in OBSTRUCTION_SHIFTS:
        raise UsageError(f"k must be one of {', '.join(str(s) for s in OBSTRUCTION_SHIFTS)}")
    d = obstruction_summary(k)
    ok = d.get("factor_matches", True) and d.get("pattern_matches", True)
    return dict(ok=ok, **d)


def _state(args, cfg: RunConfig, order: int):
    from .deformation import SymbolModule, build_infinitesimal, run
    delta = _weight(args.delta)
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    module = SymbolModule(delta, args.n)
    if order <= 1:
        return build_infinitesimal(module, cfg.mode)
    if delta.lam_coeff != 1:
        raise UsageError("higher orders need a weight of the form lam + c")
    return run(module, order, cfg.mode)


def cmd_deform(args, cfg: RunConfig) -> Result:
    from .params import render_monomial
    verb = args.verb
    order = args.order
    if verb == "build":
        st = _state(args, cfg, 1)
        return {"ok": True, "module": st.module.render(), "mode": cfg.mode,
                "parameters": [{"name": p.render(), "parity": p.parity,
                                "target": st.L1[p].out.render()} for p in st.parameters()]}
    st = _state(args, cfg, order)
    if verb == "obstruct":
        return {"ok": True, "module": st.module.render(), "order": order,
                "reports": [r.as_dict() for r in st.reports if r.order == order or args.all],
                "L2": sorted(render_monomial(m) for m in st.L2)}
    if verb == "ideal":
        from .deformation import emit_ideal
        R = emit_ideal(st)
        return dict(ok=True, module=st.module.render(), order=order, **R.as_json())
    raise UsageError(f"unknown deform verb {verb!r}")


def cmd_example(args, cfg: RunConfig) -> Result:
    from .deformation import EXAMPLES, emit_ideal, example_module, expected_example, run
    from .params import render_monomial, span_equal
    which = args.which
    if which not in EXAMPLES:
        raise UsageError(f"unknown example {which!r}; choose from {', '.join(EXAMPLES)}")
    st = run(example_module(which), args.order, cfg.mode)
    R = emit_ideal(st)
    expected = expected_example(which)
    match = span_equal(R.generators, expected)
    d = {"example": which, "module": st.module.render(), "order": args.order,
         "parameters": [p.render() for p in st.parameters()],
         "ideal": [g.render() for g in R.generators],
         "expected": [e.render() for e in expected],
         "L2": sorted(render_monomial(m) for m in st.L2), "matches_expected": match}
    if which in ("n0", "n1"):
        d["L2_zero"] = not st.L2
        match = match and not st.L2
    if not match:
        d["divergence"] = {
            "missing": [e.render() for e in expected if not R.contains(e)],
            "extra": [g.render() for g in R.generators if not _in_span(g, expected)]}
    d["ok"] = match
    return d


def _in_span(g, polys) -> bool:
    from .params import RelationIdeal, Provenance
    R = RelationIdeal()
    for p in polys:
        R.add(p, Provenance(0, Fraction(0), ""))
    return R.contains(g)


def cmd_parse(args, cfg: RunConfig) -> Result:
    from .exprparse import SyntaxError as ParseError, TypeMismatch, category, parse_value
    src = _read_expr(args.expr)
    try:
        v = parse_value(src, args.expect)
    except ParseError as e:
        return {"ok": False, "error": "syntax", "line": e.line, "column": e.column,
                "expected": sorted(e.expected), "message": str(e)}
    except TypeMismatch as e:
        return {"ok": False, "error": "type", "message": str(e)}
    return {"ok": True, "category": category(v), "value": v.render()}


def cmd_selftest(args, cfg: RunConfig) -> Result:
    """Quick smoke checks across modules at small degree."""
    checks: List[dict] = []

    def run(name: str, fn: Callable[[], bool]):
        try:
            ok = bool(fn())
        except Exception as e:  # report, do not crash
            log.exception("selftest %s", name)
            checks.append({"name": name, "ok": False, "error": f"{type(e).__name__}: {e}"})
            return
        checks.append({"name": name, "ok": ok})

    from .cohomology import catalog, delta1
    from .contact import check_super_jacobi
    from .densities import check_representation
    from .exprparse import parse_value
    from .superspace import random_superpoly
    from .transvectants import TransvectantSpec, check_osp_invariance
    from .densities import Weight

    rng = random.Random(cfg.seed)
    run("jacobi", lambda: check_super_jacobi(4).ok)
    run("representation", lambda: check_representation(4).ok)
    run("transvectant 5/2", lambda: check_osp_invariance(
        TransvectantSpec(Weight.const(-1), Weight.lam(), Fraction(5, 2)), 4).ok)
    for name in ("gamma[lam,lam]", "gamma[lam,lam+3/2]", "gamma[lam,lam+2]", "gamma[lam,lam+5/2]"):
        run(f"cocycle {name}", lambda name=name: delta1(catalog(name)).is_zero())

    def roundtrip():
        for _ in range(20):
            p = random_superpoly(rng, rng.randint(0, 1), 5, lam=True)
            if parse_value(p.render(), "poly") != p:
                return False
        return True
    run("parser round-trip", roundtrip)
    return {"ok": all(c["ok"] for c in checks), "seed": cfg.seed, "checks": checks}


# -- plumbing ------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--degree-cap", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--mode", choices=("generic", "full"), default=argparse.SUPPRESS)
    common.add_argument("--output", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--json", dest="output", action="store_const", const="json", default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = _Parser(prog="superdeform", parents=[common],
                description="Deformations of the module of symbols on the superline.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common], help="bracket | action | cocycle <id> | transvectant <k>")
    v.add_argument("target", choices=("bracket", "action", "cocycle", "transvectant"))
    v.add_argument("arg", nargs="?", help="cocycle id, transvectant k, or weight for `action`")
    v.add_argument("--alpha")
    v.add_argument("--beta")
    v.add_argument("--table", choices=("printed", "kernel"), default="printed")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("cocycles", parents=[common], help="list the cocycle catalog")
    c.add_argument("action", choices=("list",))
    c.set_defaults(func=cmd_cocycles)

    cu = sub.add_parser("cup", parents=[common], help="cup product of two catalog cocycles")
    cu.add_argument("first")
    cu.add_argument("second")
    cu.set_defaults(func=cmd_cup)

    o = sub.add_parser("obstruct", parents=[common], help="second-order obstruction B[lam,lam+k]")
    o.add_argument("k")
    o.set_defaults(func=cmd_obstruct)

    d = sub.add_parser("deform", parents=[common], help="build | obstruct | ideal")
    d.add_argument("verb", choices=("build", "obstruct", "ideal"))
    d.add_argument("--delta", default="lam")
    d.add_argument("--n", type=int, default=4)
    d.add_argument("--order", type=int, choices=(2, 3, 4), default=2)
    d.add_argument("--all", action="store_true", help="with obstruct: reports of every order")
    d.add_argument("--format", choices=("json", "text"), default=None)
    d.set_defaults(func=cmd_deform)

    e = sub.add_parser("example", parents=[common], help="worked examples n0 | n1 | n3 | n4")
    e.add_argument("which")
    e.add_argument("--order", type=int, choices=(2, 3, 4), default=2)
    e.set_defaults(func=cmd_example)

    pa = sub.add_parser("parse", parents=[common], help="parse and normalize an expression (or @file)")
    pa.add_argument("expr")
    pa.add_argument("--expect", choices=("poly", "field", "density", "weight"))
    pa.set_defaults(func=cmd_parse)

    s = sub.add_parser("selftest", parents=[common], help="fast smoke checks")
    s.set_defaults(func=cmd_selftest)
    return p


def _text(d, indent: int = 0) -> List[str]:
    pad = "  " * indent
    out = []
    for k, v in d.items():
        if isinstance(v, dict):
            out.append(f"{pad}{k}:")
            out.extend(_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out.append(f"{pad}{k}:")
            for item in v:
                sub = _text(item, indent + 2)
                sub[0] = "  " * (indent + 1) + "- " + sub[0].lstrip()
                out.extend(sub)
        elif isinstance(v, list):
            out.append(f"{pad}{k}:")
            out.extend(f"{pad}  - {x}" for x in v)
        else:
            out.append(f"{pad}{k}: {v}")
    return out


def render_report(report: dict, output: str) -> str:
    if output == "json":
        return json.dumps(report, sort_keys=True, indent=2)
    body = {k: v for k, v in report.items() if k not in ("schema", "ok", "command")}
    head = f"{report['command']}: {'PASS' if report['ok'] else 'FAIL'}"
    return "\n".join([head] + _text(body))


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        output = getattr(args, "output", "text")
        if args.command == "deform" and args.format:
            output = args.format
        cfg = RunConfig(degree_cap=getattr(args, "degree_cap", 8), mode=getattr(args, "mode", "generic"),
                        output=output, seed=getattr(args, "seed", DEFAULT_SEED), threads=_threads_from_env())
        logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
                            stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        report = args.func(args, cfg)
    except UsageError as e:
        print(f"superdeform: usage error: {e}", file=sys.stderr)
        return 1
    report = {"schema": SCHEMA, "command": args.command, **report}
    print(render_report(report, cfg.output))
    return 0 if report["ok"] else 2


if __name__ == "__main__":
    sys.exit(main())
