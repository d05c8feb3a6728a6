"""The generalised-polynomial expression language.

Grammar (ASCII, whitespace ignored)::

    expr   := term { ("+"|"-") term }
    term   := unary { ("*"|"/") unary }
    unary  := ["-"] power
    power  := atom ["^" nat]
    atom   := "n" | number | "sqrt" "(" nat ")"
            | "floor" "(" expr ")" | "frac" "(" expr ")" | "(" expr ")"
    number := nat ["/" nat]

"/" divides by a constant with nonzero rational value (so "n/3" means
(1/3)*n and "3/2" is the literal rational); sqrt radicands must be
squarefree and >= 2.  The parser folds ring operations on constants into a
single Const node, and unary minus on a non-constant multiplies by -1; this
normal form is what render() round-trips through.

Frac is a first-class node (not just sugar for g - floor(g)) because the
bounded expansion needs it as a bounded atom.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .exactreal import ExactReal, is_squarefree
from .values import ComplexValue


class ExprSyntaxError(Exception):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


class UnsupportedConstant(Exception):
    pass


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: ExactReal


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Add:
    left: "GPExpr"
    right: "GPExpr"


@dataclass(frozen=True)
class Sub:
    left: "GPExpr"
    right: "GPExpr"


@dataclass(frozen=True)
class Mul:
    left: "GPExpr"
    right: "GPExpr"


@dataclass(frozen=True)
class Pow:
    base: "GPExpr"
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("Pow exponent must be >= 0")


@dataclass(frozen=True)
class Floor:
    arg: "GPExpr"


@dataclass(frozen=True)
class Frac:
    arg: "GPExpr"


GPExpr = Const | Var | Add | Sub | Mul | Pow | Floor | Frac

N = Var()


@dataclass(frozen=True)
class ComplexGP:
    """A complex-valued generalised polynomial, real and imaginary parts."""

    re: GPExpr
    im: GPExpr

    def eval(self, n: int) -> ComplexValue:
        return ComplexValue(evaluate(self.re, n), evaluate(self.im, n))


# -- smart constructors (the parser's normal form) ----------------------------


def const(v) -> Const:
    return Const(v if isinstance(v, ExactReal) else ExactReal(Fraction(v)))


def _is_const(e: GPExpr, q) -> bool:
    return isinstance(e, Const) and e.value == ExactReal(q)


def add(a: GPExpr, b: GPExpr) -> GPExpr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    return Add(a, b)


def sub(a: GPExpr, b: GPExpr) -> GPExpr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is_const(b, 0):
        return a
    return Sub(a, b)


def mul(a: GPExpr, b: GPExpr) -> GPExpr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is_const(a, 0) or _is_const(b, 0):
        return const(0)
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    return Mul(a, b)


def pow_(a: GPExpr, k: int) -> GPExpr:
    if isinstance(a, Const):
        return Const(a.value**k)
    return Pow(a, k)


def neg(a: GPExpr) -> GPExpr:
    if isinstance(a, Const):
        return Const(-a.value)
    return Mul(const(-1), a)


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-zA-Z_]+)|([+\-*/^()]))")


def _tokenize(text: str):
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ExprSyntaxError(
                f"unexpected character {stripped[0]!r}", len(text) - len(stripped)
            )
        num, name, op = m.groups()
        tok_pos = m.end() - len((num or name or op))
        if num is not None:
            tokens.append(("num", int(num), tok_pos))
        elif name is not None:
            tokens.append(("name", name, tok_pos))
        else:
            tokens.append(("op", op, tok_pos))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)
        self.next()

    def parse(self) -> GPExpr:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos)
        return e

    def expr(self) -> GPExpr:
        e = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                e = add(e, rhs) if val == "+" else sub(e, rhs)
            else:
                return e

    def term(self) -> GPExpr:
        e = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.unary()
                if val == "*":
                    e = mul(e, rhs)
                else:
                    e = mul(const(self._divisor(rhs, pos)), e)
            else:
                return e

    def _divisor(self, rhs: GPExpr, pos: int) -> Fraction:
        q = rhs.value.is_rational() if isinstance(rhs, Const) else None
        if q is None:
            raise UnsupportedConstant(
                f"division requires a rational constant divisor (at offset {pos})"
            )
        if q == 0:
            raise UnsupportedConstant(f"division by zero (at offset {pos})")
        return 1 / q

    def unary(self) -> GPExpr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return neg(self.power())
        return self.power()

    def power(self) -> GPExpr:
        e = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            k_kind, k, pos = self.next()
            if k_kind != "num":
                raise ExprSyntaxError("expected integer exponent", pos)
            e = pow_(e, k)
        return e

    def atom(self) -> GPExpr:
        kind, val, pos = self.next()
        if kind == "num":
            return const(val)
        if kind == "name":
            if val == "n":
                return N
            if val == "sqrt":
                self.expect_op("(")
                d_kind, d, d_pos = self.next()
                if d_kind != "num":
                    raise ExprSyntaxError("expected integer radicand", d_pos)
                self.expect_op(")")
                if d < 2 or not is_squarefree(d):
                    raise UnsupportedConstant(
                        f"sqrt radicand must be squarefree and >= 2, got {d}"
                    )
                return const(ExactReal.sqrt_int(d))
            if val in ("floor", "frac"):
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return Floor(inner) if val == "floor" else Frac(inner)
            raise ExprSyntaxError(f"unknown name {val!r}", pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ExprSyntaxError("expected an atom", pos)


def parse(text: str) -> GPExpr:
    return _Parser(text).parse()


def parse_constant(text: str) -> ExactReal:
    """Parse a constant expression (no n) to its exact value."""
    e = parse(text)
    if _contains_var(e):
        raise UnsupportedConstant(f"expected a constant, got {text!r}")
    return evaluate(e, 0)


def _contains_var(e: GPExpr) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, (Add, Sub, Mul)):
        return _contains_var(e.left) or _contains_var(e.right)
    if isinstance(e, Pow):
        return _contains_var(e.base)
    if isinstance(e, (Floor, Frac)):
        return _contains_var(e.arg)
    return False


# -- rendering ------------------------------------------------------------------

_SUM, _TERM, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5


def _render_rational(q: Fraction) -> tuple[str, int]:
    if q.denominator == 1:
        s = str(q.numerator)
        return s, (_ATOM if q >= 0 else _UNARY)
    return str(q), _TERM


def _render_term(e: int, c: Fraction) -> tuple[str, int]:
    if e == 1:
        return _render_rational(c)
    if c == 1:
        return f"sqrt({e})", _ATOM
    if c == -1:
        return f"-sqrt({e})", _UNARY
    return f"{_render_rational(c)[0]}*sqrt({e})", _TERM


def _render_const(v: ExactReal) -> tuple[str, int]:
    coords = sorted(v.coordinates().items())
    if not coords:
        return "0", _ATOM
    if len(coords) == 1:
        return _render_term(*coords[0])
    out = ""
    for e, c in coords:
        part = _render_term(e, c)[0]
        if not out:
            out = part
        elif part.startswith("-"):
            out += f" - {part[1:]}"
        else:
            out += f" + {part}"
    return out, _SUM


def _rend(e: GPExpr, need: int) -> str:
    if isinstance(e, Const):
        s, prec = _render_const(e.value)
    elif isinstance(e, Var):
        s, prec = "n", _ATOM
    elif isinstance(e, Add):
        s, prec = f"{_rend(e.left, _SUM)} + {_rend(e.right, _TERM)}", _SUM
    elif isinstance(e, Sub):
        s, prec = f"{_rend(e.left, _SUM)} - {_rend(e.right, _TERM)}", _SUM
    elif isinstance(e, Mul):
        s, prec = f"{_rend(e.left, _TERM)}*{_rend(e.right, _UNARY)}", _TERM
    elif isinstance(e, Pow):
        s, prec = f"{_rend(e.base, _ATOM)}^{e.exponent}", _POW
    elif isinstance(e, Floor):
        s, prec = f"floor({_rend(e.arg, _SUM)})", _ATOM
    elif isinstance(e, Frac):
        s, prec = f"frac({_rend(e.arg, _SUM)})", _ATOM
    else:
        raise TypeError(f"not a GPExpr: {e!r}")
    return f"({s})" if prec < need else s


def render(e: GPExpr) -> str:
    """Concrete syntax such that parse(render(e)) == e for parser-normal ASTs."""
    return _rend(e, _SUM)


# -- evaluation --------------------------------------------------------------


def evaluate(e: GPExpr, n: int) -> ExactReal:
    """Exact value at n >= 0 (sequences here are one-sided)."""
    if n < 0:
        raise ValueError("evaluation is defined for n >= 0")
    return _eval(e, n)


def _eval(e: GPExpr, n: int) -> ExactReal:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return ExactReal(n)
    if isinstance(e, Add):
        return _eval(e.left, n) + _eval(e.right, n)
    if isinstance(e, Sub):
        return _eval(e.left, n) - _eval(e.right, n)
    if isinstance(e, Mul):
        return _eval(e.left, n) * _eval(e.right, n)
    if isinstance(e, Pow):
        return _eval(e.base, n) ** e.exponent
    if isinstance(e, Floor):
        return ExactReal(_eval(e.arg, n).floor())
    if isinstance(e, Frac):
        return _eval(e.arg, n).frac()
    raise TypeError(f"not a GPExpr: {e!r}")


# -- bounded expansion ---------------------------------------------------------


@dataclass(frozen=True)
class BoundedExpansion:
    """value(n) = sum_i coeffs[i](n) * n^i with each coefficient bounded on N.

    Coefficients are ring combinations of constants and frac(...) atoms, so
    boundedness holds by construction.
    """

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def _pad(cs: list, d: int) -> list:
    return cs + [const(0)] * (d + 1 - len(cs))


def _trim(cs: list) -> list:
    while len(cs) > 1 and isinstance(cs[-1], Const) and cs[-1].value.is_zero():
        cs.pop()
    return cs


def _expand(e: GPExpr) -> list:
    if isinstance(e, Const):
        return [e]
    if isinstance(e, Var):
        return [const(0), const(1)]
    if isinstance(e, (Add, Sub)):
        a, b = _expand(e.left), _expand(e.right)
        d = max(len(a), len(b)) - 1
        a, b = _pad(a, d), _pad(b, d)
        op = add if isinstance(e, Add) else sub
        return _trim([op(x, y) for x, y in zip(a, b)])
    if isinstance(e, Mul):
        a, b = _expand(e.left), _expand(e.right)
        out = [const(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = add(out[i + j], mul(x, y))
        return _trim(out)
    if isinstance(e, Pow):
        # exponent is a literal: expand by repeated multiplication
        out = [const(1)]
        for _ in range(e.exponent):
            out = _expand_mul(out, _expand(e.base))
        return out
    if isinstance(e, Floor):
        # floor(g) = g - frac(g): reuse g's coefficients, absorbing the
        # bounded correction -frac(g) into the constant coefficient.
        cs = list(_expand(e.arg))
        cs[0] = sub(cs[0], Frac(e.arg))
        return _trim(cs)
    if isinstance(e, Frac):
        return [Frac(e.arg)]
    raise TypeError(f"not a GPExpr: {e!r}")


def _expand_mul(a: list, b: list) -> list:
    out = [const(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = add(out[i + j], mul(x, y))
    return _trim(out)


def expand(e: GPExpr) -> BoundedExpansion:
    """Rewrite e as sum_i g_i(n) * n^i with bounded coefficient sequences g_i."""
    return BoundedExpansion(tuple(_expand(e)))


def eval_expansion(exp: BoundedExpansion, n: int) -> ExactReal:
    if n < 0:
        raise ValueError("evaluation is defined for n >= 0")
    total = ExactReal(0)
    for i, c in enumerate(exp.coeffs):
        total = total + _eval(c, n) * (n**i)
    return total


def coefficient_bound(e: GPExpr) -> Fraction:
    """Structural upper bound for |e(n)| over all n, for expansion coefficients.

    Valid for ring combinations of constants and frac(...) atoms; raises on a
    bare variable, which never occurs in coefficients produced by expand().
    """
    if isinstance(e, Const):
        box = e.value.approx(32)
        return max(abs(box.lo), abs(box.hi))
    if isinstance(e, Var):
        raise ValueError("unbounded: bare variable in coefficient")
    if isinstance(e, (Add, Sub)):
        return coefficient_bound(e.left) + coefficient_bound(e.right)
    if isinstance(e, Mul):
        return coefficient_bound(e.left) * coefficient_bound(e.right)
    if isinstance(e, Pow):
        return coefficient_bound(e.base) ** e.exponent
    if isinstance(e, Floor):
        return coefficient_bound(e.arg) + 1
    if isinstance(e, Frac):
        return Fraction(1)
    raise TypeError(f"not a GPExpr: {e!r}")
