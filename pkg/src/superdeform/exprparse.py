"""ASCII surface syntax for superpolynomials, contact fields, densities and weights.

Grammar (LL(1)); precedence ``^`` > unary minus > ``* /`` > ``+ -``::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" exponent)?
    exponent:= INT | "(" expr ")"            # the parenthesized form only after "a"
    atom    := NUMBER | "lam" | "x" | "th" | "(" expr ")"
             | ("Dx" | "eta" | "etabar") "(" expr ")"
             | "v" "[" expr "]"
             | "a" "^" "(" expr ")"

``a^(w)`` marks a density of weight w.  Weights are affine in lam with
half-integer offsets and are a separate category from polynomials.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Optional, Tuple, Union

from .contact import ContactField
from .densities import Density, Weight
from .scalars import LamPoly, RatFunc
from .superspace import SuperPoly, d_x, eta, eta_bar


class SyntaxError(ValueError):  # noqa: A001 - mirrors the interface name
    def __init__(self, message: str, line: int, column: int, expected: FrozenSet[str]):
        self.line, self.column, self.expected = line, column, expected
        exp = ", ".join(sorted(expected))
        super().__init__(f"{line}:{column}: {message} (expected one of: {exp})")


class TypeMismatch(TypeError):
    pass


# -- AST ------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class LamSym:
    pass


@dataclass(frozen=True)
class XPow:
    n: int


@dataclass(frozen=True)
class Theta:
    pass


@dataclass(frozen=True)
class Sum:
    terms: Tuple["Ast", ...]
    signs: Tuple[int, ...]


@dataclass(frozen=True)
class Product:
    factors: Tuple["Ast", ...]


@dataclass(frozen=True)
class Quotient:
    num: "Ast"
    den: "Ast"


@dataclass(frozen=True)
class Neg:
    arg: "Ast"


@dataclass(frozen=True)
class Power:
    base: "Ast"
    n: int


@dataclass(frozen=True)
class Deriv:
    name: str  # "Dx", "eta", "etabar"
    arg: "Ast"


@dataclass(frozen=True)
class FieldLit:
    arg: "Ast"


@dataclass(frozen=True)
class DensityWeight:
    weight: "Ast"


Ast = Union[Num, LamSym, XPow, Theta, Sum, Product, Quotient, Neg, Power, Deriv, FieldLit, DensityWeight]

# -- lexer ------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(etabar|eta|Dx|lam|th|x|v|a)\b|([-+*/^()\[\]]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "INT", a keyword, a punctuation char, or "EOF"
    text: str
    line: int
    column: int


def tokenize(src: str) -> List[Token]:
    out: List[Token] = []
    pos = 0
    line, line_start = 1, 0
    while True:
        # track newlines inside skipped whitespace
        while pos < len(src) and src[pos].isspace():
            if src[pos] == "\n":
                line += 1
                line_start = pos + 1
            pos += 1
        if pos >= len(src):
            out.append(Token("EOF", "", line, pos - line_start + 1))
            return out
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise SyntaxError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1,
                              frozenset({"number", "lam", "x", "th", "(", "-"}))
        col = m.start(m.lastindex) - line_start + 1
        if m.group(1):
            out.append(Token("INT", m.group(1), line, col))
        elif m.group(2):
            out.append(Token(m.group(2), m.group(2), line, col))
        else:
            out.append(Token(m.group(3), m.group(3), line, col))
        pos = m.end()


_ATOM_FIRST = frozenset({"number", "lam", "x", "th", "(", "Dx", "eta", "etabar", "v", "a", "-"})


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def eat(self, kind: str, expected: Optional[FrozenSet[str]] = None) -> Token:
        t = self.tok
        if t.kind != kind:
            self.fail(expected or frozenset({kind}))
        self.i += 1
        return t

    def fail(self, expected: FrozenSet[str]):
        t = self.tok
        what = "end of input" if t.kind == "EOF" else repr(t.text)
        raise SyntaxError(f"unexpected {what}", t.line, t.column, expected)

    def parse(self) -> Ast:
        e = self.expr()
        if self.tok.kind != "EOF":
            self.fail(frozenset({"+", "-", "*", "/", "EOF"}))
        return e

    def expr(self) -> Ast:
        terms, signs = [self.term()], [1]
        while self.tok.kind in ("+", "-"):
            signs.append(1 if self.eat(self.tok.kind).kind == "+" else -1)
            terms.append(self.term())
        if len(terms) == 1:
            return terms[0]
        return Sum(tuple(terms), tuple(signs))

    def term(self) -> Ast:
        node = self.unary()
        factors = [node]
        while self.tok.kind in ("*", "/"):
            if self.eat(self.tok.kind).kind == "*":
                factors.append(self.unary())
            else:
                den = self.unary()
                left = factors[0] if len(factors) == 1 else Product(tuple(factors))
                factors = [Quotient(left, den)]
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def unary(self) -> Ast:
        if self.tok.kind == "-":
            self.eat("-")
            return Neg(self.unary())
        return self.power()

    def power(self) -> Ast:
        base = self.atom()
        if self.tok.kind == "^":
            self.eat("^")
            n = int(self.eat("INT", frozenset({"integer exponent"})).text)
            return _pow(base, n)
        return base

    def atom(self) -> Ast:
        t = self.tok
        k = t.kind
        if k == "INT":
            self.i += 1
            return Num(Fraction(int(t.text)))
        if k == "lam":
            self.i += 1
            return LamSym()
        if k == "x":
            self.i += 1
            return XPow(1)
        if k == "th":
            self.i += 1
            return Theta()
        if k == "(":
            self.i += 1
            e = self.expr()
            self.eat(")", frozenset({")", "+", "-", "*", "/"}))
            return e
        if k in ("Dx", "eta", "etabar"):
            self.i += 1
            self.eat("(")
            e = self.expr()
            self.eat(")", frozenset({")", "+", "-", "*", "/"}))
            return Deriv(k, e)
        if k == "v":
            self.i += 1
            self.eat("[")
            e = self.expr()
            self.eat("]", frozenset({"]", "+", "-", "*", "/"}))
            return FieldLit(e)
        if k == "a":
            self.i += 1
            self.eat("^")
            self.eat("(")
            e = self.expr()
            self.eat(")", frozenset({")", "+", "-", "*", "/"}))
            return DensityWeight(e)
        self.fail(_ATOM_FIRST)


def _pow(base: Ast, n: int) -> Ast:
    if isinstance(base, XPow):
        return XPow(base.n * n)
    if isinstance(base, Theta) and n == 1:
        return base
    return Power(base, n)  # th^n with n >= 2 elaborates to the zero polynomial


def parse(src: str) -> Ast:
    return _Parser(src).parse()


# -- elaboration -------------------------------------------------------------------------

Value = Union[SuperPoly, ContactField, Density, Weight]


@dataclass
class _Scalar:
    v: RatFunc


def _poly_of(v) -> SuperPoly:
    if isinstance(v, SuperPoly):
        return v
    if isinstance(v, _Scalar):
        return SuperPoly({0: v.v}) if not v.v.is_zero() else SuperPoly()
    raise TypeMismatch(f"expected a polynomial, found {_kind(v)}")


def _kind(v) -> str:
    return {SuperPoly: "polynomial", ContactField: "contact field", Density: "density", Weight: "weight",
            _Scalar: "scalar", _DW: "density weight"}.get(type(v), type(v).__name__)


@dataclass
class _DW:
    w: Weight


def _weight_of(v) -> Weight:
    if isinstance(v, Weight):
        return v
    if isinstance(v, _Scalar):
        r = v.v
        if not r.den.is_const() or r.num.degree > 1:
            raise TypeMismatch(f"weight must be affine in lam, got {r.render()}")
        c = r.num.c
        b = Fraction(c[0]) if c else Fraction(0)
        a = Fraction(c[1]) if len(c) > 1 else Fraction(0)
        if a.denominator != 1 or (2 * b).denominator != 1:
            raise TypeMismatch(f"weight {r.render()} needs an integer lam coefficient and half-integer offset")
        return Weight(int(a), b)
    raise TypeMismatch(f"expected a weight, found {_kind(v)}")


def _ev(node: Ast):
    if isinstance(node, Num):
        return _Scalar(RatFunc.const(node.value))
    if isinstance(node, LamSym):
        return _Scalar(RatFunc.lam())
    if isinstance(node, XPow):
        return SuperPoly.monomial(0, node.n)
    if isinstance(node, Theta):
        return SuperPoly.monomial(1, 0)
    if isinstance(node, Neg):
        v = _ev(node.arg)
        return _neg(v)
    if isinstance(node, Sum):
        acc = None
        for t, s in zip(node.terms, node.signs):
            v = _ev(t)
            v = v if s == 1 else _neg(v)
            acc = v if acc is None else _add(acc, v)
        return acc
    if isinstance(node, Product):
        acc = None
        for f in node.factors:
            v = _ev(f)
            acc = v if acc is None else _mul(acc, v)
        return acc
    if isinstance(node, Quotient):
        num, den = _ev(node.num), _ev(node.den)
        if not isinstance(den, _Scalar):
            raise TypeMismatch(f"can only divide by a scalar, found {_kind(den)}")
        if den.v.is_zero():
            raise TypeMismatch("division by zero")
        return _mul(num, _Scalar(RatFunc.const(1) / den.v))
    if isinstance(node, Power):
        v = _ev(node.base)
        out = _Scalar(RatFunc.const(1))
        for _ in range(node.n):
            out = _mul(out, v)
        return out
    if isinstance(node, Deriv):
        p = _poly_of(_ev(node.arg))
        if node.name != "Dx" and not p.is_homogeneous():
            raise TypeMismatch(f"{node.name} needs a homogeneous argument, found {p.render()}")
        return {"Dx": d_x, "eta": eta, "etabar": eta_bar}[node.name](p)
    if isinstance(node, FieldLit):
        v = _ev(node.arg)
        p = _poly_of(v)
        if not p.is_homogeneous():
            raise TypeMismatch(f"a contact field needs a homogeneous generator, found {p.render()}")
        return ContactField(p)
    if isinstance(node, DensityWeight):
        return _DW(_weight_of(_ev(node.weight)))
    raise TypeMismatch(f"unknown node {node!r}")


def _neg(v):
    if isinstance(v, _Scalar):
        return _Scalar(-v.v)
    if isinstance(v, SuperPoly):
        return -v
    if isinstance(v, Weight):
        return Weight(-v.lam_coeff, -v.offset)
    if isinstance(v, Density):
        return Density(-v.coeff, v.weight)
    raise TypeMismatch(f"cannot negate a {_kind(v)}")


def _add(a, b):
    if isinstance(a, _Scalar) and isinstance(b, _Scalar):
        return _Scalar(a.v + b.v)
    if isinstance(a, Density) and isinstance(b, Density):
        if a.weight != b.weight:
            raise TypeMismatch("cannot add densities of different weights")
        return Density(a.coeff + b.coeff, a.weight)
    if isinstance(a, (SuperPoly, _Scalar)) and isinstance(b, (SuperPoly, _Scalar)):
        return _poly_of(a) + _poly_of(b)
    raise TypeMismatch(f"cannot add {_kind(a)} and {_kind(b)}")


def _mul(a, b):
    if isinstance(a, _Scalar) and isinstance(b, _Scalar):
        return _Scalar(a.v * b.v)
    if isinstance(b, _DW) or isinstance(a, _DW):
        other, dw = (a, b) if isinstance(b, _DW) else (b, a)
        if isinstance(other, _DW) or isinstance(other, Density):
            raise TypeMismatch("a density carries a single weight factor")
        return Density(_poly_of(other), dw.w)
    if isinstance(a, Density) or isinstance(b, Density):
        d, o = (a, b) if isinstance(a, Density) else (b, a)
        if not isinstance(o, _Scalar):
            raise TypeMismatch(f"cannot multiply a density by a {_kind(o)}")
        return Density(d.coeff.scale(o.v), d.weight)
    if isinstance(a, (SuperPoly, _Scalar)) and isinstance(b, (SuperPoly, _Scalar)):
        if isinstance(a, _Scalar):
            return b.scale(a.v) if isinstance(b, SuperPoly) else _Scalar(a.v * b.v)
        if isinstance(b, _Scalar):
            return a.scale(b.v)
        return a * b
    raise TypeMismatch(f"cannot multiply {_kind(a)} by {_kind(b)}")


def elaborate(ast: Ast, expect: Optional[str] = None) -> Value:
    """Evaluate an AST.  ``expect`` in {None, "poly", "field", "density", "weight"}.

    Without ``expect`` a scalar-only expression is a Weight (and must be affine);
    anything mentioning x, th or a derivation is a SuperPoly.
    """
    v = _ev(ast)
    if isinstance(v, _DW):
        raise TypeMismatch("a^(...) needs a coefficient")
    if expect is None:
        return _weight_of(v) if isinstance(v, _Scalar) else v
    if expect == "poly":
        return _poly_of(v)
    if expect == "weight":
        return _weight_of(v)
    if expect == "field":
        if not isinstance(v, ContactField):
            raise TypeMismatch(f"expected a contact field, found {_kind(v)}")
        return v
    if expect == "density":
        if not isinstance(v, Density):
            raise TypeMismatch(f"expected a density, found {_kind(v)}")
        return v
    raise ValueError(f"unknown category {expect!r}")


def parse_value(src: str, expect: Optional[str] = None) -> Value:
    return elaborate(parse(src), expect)


def category(v: Value) -> str:
    return {SuperPoly: "poly", ContactField: "field", Density: "density", Weight: "weight"}[type(v)]


def render_value(v: Value) -> str:
    return v.render()


def render_ast(node: Ast) -> str:
    """Fully parenthesized rendering; parse(render_ast(a)) == a for parser-produced trees."""
    if isinstance(node, Num):
        q = node.value
        return str(q.numerator) if q.denominator == 1 else f"({q.numerator}/{q.denominator})"
    if isinstance(node, LamSym):
        return "lam"
    if isinstance(node, XPow):
        return "x" if node.n == 1 else f"x^{node.n}"
    if isinstance(node, Theta):
        return "th"
    if isinstance(node, Neg):
        return f"(-{render_ast(node.arg)})"
    if isinstance(node, Sum):
        out = render_ast(node.terms[0])
        for t, s in zip(node.terms[1:], node.signs[1:]):
            out += (" + " if s == 1 else " - ") + render_ast(t)
        return f"({out})"
    if isinstance(node, Product):
        return "(" + "*".join(render_ast(f) for f in node.factors) + ")"
    if isinstance(node, Quotient):
        return f"({render_ast(node.num)}/{render_ast(node.den)})"
    if isinstance(node, Power):
        return f"({render_ast(node.base)})^{node.n}"
    if isinstance(node, Deriv):
        return f"{node.name}({render_ast(node.arg)})"
    if isinstance(node, FieldLit):
        return f"v[{render_ast(node.arg)}]"
    if isinstance(node, DensityWeight):
        return f"a^({render_ast(node.weight)})"
    raise TypeError(node)


EBNF = __doc__.split("::", 1)[1].split("``a^(w)``")[0]

__all__ = ["parse", "elaborate", "parse_value", "render_ast", "render_value", "category", "SyntaxError",
           "TypeMismatch", "Num", "LamSym", "XPow", "Theta", "Sum", "Product", "Quotient", "Neg", "Power",
           "Deriv", "FieldLit", "DensityWeight", "tokenize", "EBNF"]
