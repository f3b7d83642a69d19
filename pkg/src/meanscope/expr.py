"""Generator expressions: parsing, unparsing, evaluation and the builtin catalog.

Grammar (version 1)::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := "-" unary | power
    power    := atom ("^" exponent)?
    exponent := "-" exponent | power
    atom     := number | "x" | "pi" | "e" | func "(" expr ")" | "(" expr ")"
    func     := "exp" | "log" | "sin" | "cos" | "sinh" | "cosh" | "sqrt" | "abs"
    number   := digits ["." digits] [("e" | "E") ["+" | "-"] digits]

Precedence is ``^`` over unary minus over ``* /`` over ``+ -``. Binary
operators are left-associative except ``^``, which is right-associative.
The exponent of ``^`` must not contain ``x``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

from .errors import (
    CatalogError,
    DomainError,
    EmptyExpressionError,
    ExprSyntaxError,
    JetError,
    UnknownIdentifierError,
)
from .jets import Jet, jet_arith, jet_compose, jet_constant, jet_pow, jet_variable

GRAMMAR_VERSION = 1

FUNCTIONS = ("exp", "log", "sin", "cos", "sinh", "cosh", "sqrt", "abs")
CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLE = "x"


# AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a name from FUNCTIONS
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, Unary, Binary]


def has_variable(e: Expr) -> bool:
    if isinstance(e, Var):
        return True
    if isinstance(e, Const):
        return False
    if isinstance(e, Unary):
        return has_variable(e.arg)
    return has_variable(e.left) or has_variable(e.right)


# Tokenizer ----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass
class _Token:
    kind: str  # num, name, op, end
    text: str
    pos: int  # character index


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.lastgroup is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}",
                                  _byte_offset(text, pos))
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    # 1-based, like SyntaxError.offset
    return len(text[:pos].encode("utf-8")) + 1


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: _Token) -> ExprSyntaxError:
        return ExprSyntaxError(message, _byte_offset(self.text, tok.pos))

    def is_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    def expect_close(self) -> None:
        tok = self.peek()
        if tok.kind == "end":
            raise self.error("unclosed parenthesis", tok)
        if not self.is_op(")"):
            raise self.error(f"expected ')' but found {tok.text!r}", tok)
        self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"unexpected {tok.text!r}", tok)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.is_op("+", "-"):
            op = self.advance().text
            left = Binary(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.is_op("*", "/"):
            op = self.advance().text
            left = Binary(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.is_op("-"):
            self.advance()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.is_op("^"):
            self.advance()
            start = self.peek()
            exponent = self.exponent()
            if has_variable(exponent):
                raise self.error("exponent must be constant", start)
            return Binary("^", base, exponent)
        return base

    def exponent(self) -> Expr:
        if self.is_op("-"):
            self.advance()
            return Unary("neg", self.exponent())
        return self.power()

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Const(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text == VARIABLE:
                return Var()
            if tok.text in CONSTANTS:
                return Const(CONSTANTS[tok.text])
            if tok.text in FUNCTIONS:
                if not self.is_op("("):
                    raise self.error(f"expected '(' after {tok.text}", self.peek())
                self.advance()
                arg = self.expr()
                self.expect_close()
                return Unary(tok.text, arg)
            raise UnknownIdentifierError(tok.text, _byte_offset(self.text, tok.pos))
        if self.is_op("("):
            self.advance()
            inner = self.expr()
            self.expect_close()
            return inner
        if tok.kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {tok.text!r}", tok)


def parse_expr(text: str) -> Expr:
    """Parse ``text`` into an AST.

    >>> unparse(parse_expr("x^2 - 3*x"))
    '((x^2)-(3*x))'
    """
    if not text.strip():
        raise EmptyExpressionError()
    return _Parser(text).parse()


def _format_number(v: float) -> str:
    if v.is_integer() and abs(v) < 2.0 ** 53:
        return str(int(v))
    return repr(v)


def unparse(e: Expr) -> str:
    """Fully parenthesized text that parses back to the same AST."""
    if isinstance(e, Const):
        s = _format_number(e.value)
        return f"({s})" if e.value < 0 else s
    if isinstance(e, Var):
        return VARIABLE
    if isinstance(e, Unary):
        if e.op == "neg":
            return f"(-{unparse(e.arg)})"
        return f"{e.op}({unparse(e.arg)})"
    return f"({unparse(e.left)}{e.op}{unparse(e.right)})"


# Evaluation ---------------------------------------------------------------

def _int_pow_float(v: float, n: int) -> float:
    result = 1.0
    base = v
    while n:
        if n & 1:
            result *= base
        n >>= 1
        if n:
            base *= base
    return result


def _is_small_int(r: float) -> bool:
    return float(r).is_integer() and abs(r) <= 64


_FLOAT_FUNCS = {
    "exp": math.exp,
    "sin": math.sin,
    "cos": math.cos,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "abs": abs,
}


def _value(e: Expr, x: float) -> float:
    if isinstance(e, Var):
        return x
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Unary):
        a = _value(e.arg, x)
        op = e.op
        if op == "neg":
            return -a
        if op == "log":
            if a <= 0.0:
                raise DomainError("log of nonpositive value")
            return math.log(a)
        if op == "sqrt":
            if a < 0.0:
                raise DomainError("sqrt of negative value")
            return math.sqrt(a)
        return _FLOAT_FUNCS[op](a)
    op = e.op
    a = _value(e.left, x)
    b = _value(e.right, x)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0.0:
            raise DomainError("division by zero")
        return a / b
    if _is_small_int(b):
        n = int(b)
        if n < 0:
            if a == 0.0:
                raise DomainError("division by zero")
            return 1.0 / _int_pow_float(a, -n)
        return _int_pow_float(a, n)
    if a <= 0.0:
        raise DomainError("non-integer power of nonpositive value")
    return a ** b


def eval_value(e: Expr, x: float) -> float:
    """Value of ``e`` at the real point ``x``."""
    try:
        v = _value(e, x)
    except JetError as exc:
        raise DomainError(exc.reason, order=exc.order, point=x) from None
    except OverflowError:
        raise DomainError("overflow", point=x) from None
    if not math.isfinite(v):
        raise DomainError("non-finite value", point=x)
    return v


def _jet(e: Expr, x: Jet) -> Jet:
    if isinstance(e, Var):
        return x
    if isinstance(e, Const):
        return jet_constant(e.value)
    if isinstance(e, Unary):
        a = _jet(e.arg, x)
        if e.op == "neg":
            return -a
        return jet_compose(e.op, a)
    if e.op == "^":
        return jet_pow(_jet(e.left, x), _value(e.right, 0.0))
    a = _jet(e.left, x)
    b = _jet(e.right, x)
    return jet_arith(_JET_OPS[e.op], a, b)


_JET_OPS = {"+": "add", "-": "sub", "*": "mul", "/": "div"}


def eval_expr(e: Expr, x: Jet | float) -> Jet:
    """Jet of ``e`` composed with the input jet ``x``.

    A plain float is promoted to ``jet_variable(x)``. Domain violations raise
    :class:`~meanscope.errors.DomainError` carrying the base point.
    """
    if not isinstance(x, Jet):
        x = jet_variable(x)
    try:
        return _jet(e, x)
    except JetError as exc:
        raise DomainError(exc.reason, order=exc.order, point=x.d0) from None
    except OverflowError:
        raise DomainError("overflow", point=x.d0) from None


# Intervals and pairs ------------------------------------------------------

MARGIN_FRACTION = 1e-3


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def shrunk(self) -> tuple[float, float]:
        """Closed sampling range ``[lo + m, hi - m]`` with ``m = 1e-3 * width``."""
        m = MARGIN_FRACTION * self.width
        return (self.lo + m, self.hi - m)

    def __contains__(self, x: float) -> bool:
        return self.lo < x < self.hi


@dataclass(frozen=True)
class GeneratorPair:
    f: Expr
    g: Expr
    interval: Interval
    name: str = field(default="", compare=False)

    @classmethod
    def from_text(cls, f: str, g: str, lo: float, hi: float, name: str = "") -> "GeneratorPair":
        return cls(parse_expr(f), parse_expr(g), Interval(lo, hi), name)

    def jets(self, x: float) -> tuple[Jet, Jet]:
        j = jet_variable(x)
        return eval_expr(self.f, j), eval_expr(self.g, j)

    def values(self, x: float) -> tuple[float, float]:
        return eval_value(self.f, x), eval_value(self.g, x)

    def with_interval(self, lo: float, hi: float) -> "GeneratorPair":
        return GeneratorPair(self.f, self.g, Interval(lo, hi), self.name)

    def transformed(self, a: float, b: float, c: float, d: float) -> "GeneratorPair":
        """The equivalent pair ``(a f + b g, c f + d g)``; needs ``ad != bc``."""
        a, b, c, d = (float(v) for v in (a, b, c, d))
        if a * d - b * c == 0:
            raise ValueError("singular transformation")
        f = Binary("+", Binary("*", Const(a), self.f), Binary("*", Const(b), self.g))
        g = Binary("+", Binary("*", Const(c), self.f), Binary("*", Const(d), self.g))
        coeffs = ",".join(_format_number(v) for v in (a, b, c, d))
        name = f"{self.name}~({coeffs})" if self.name else ""
        return GeneratorPair(_fold_signs(f), _fold_signs(g), self.interval, name)

    def describe(self) -> str:
        return f"f={unparse(self.f)} g={unparse(self.g)} on ({self.interval.lo!r}, {self.interval.hi!r})"


def _fold_signs(e: Expr) -> Expr:
    # Keep constants nonnegative so transformed pairs unparse/parse cleanly.
    if isinstance(e, Binary):
        left, right = _fold_signs(e.left), _fold_signs(e.right)
        if isinstance(left, Const) and left.value < 0 and e.op == "*":
            return Unary("neg", Binary("*", Const(-left.value), right))
        return Binary(e.op, left, right)
    if isinstance(e, Unary):
        return Unary(e.op, _fold_signs(e.arg))
    return e


# Builtin catalog ----------------------------------------------------------

def _num(v: float) -> str:
    s = _format_number(float(v))
    return f"({s})" if v < 0 else s


def _x_pow(r: float) -> str:
    return "x" if r == 1 else f"x^{_num(r)}"


def _power_pair(a: float, b: float):
    if a == 0 or b == 0 or a == b:
        raise CatalogError("power_pair needs a != 0, b != 0 and a != b")
    return _x_pow(a), _x_pow(b), (0.5, 4.0)


def _log_pair():
    return "x", "log(x)", (1.0, 2.0)


def _quad_over_id(c: float):
    if c == 0:
        raise CatalogError("quad_over_id needs c != 0")
    return _x_pow(2 * c), _x_pow(c), (0.1, 10.0)


def _trig_pair():
    return "-cos(x)", "sin(x)", (-1.2, 1.2)


def _hyp_pair():
    return "(x+1/x)/2", "(x-1/x)/2", (1.0, 3.0)


def _exp_pair(c: float):
    if c == 0:
        raise CatalogError("exp_pair needs c != 0")
    return f"exp({_num(2 * c)}*x)", f"exp({_num(c)}*x)", (-1.0, 1.0)


CATALOG = {
    "power_pair": (_power_pair, 2),
    "log_pair": (_log_pair, 0),
    "quad_over_id": (_quad_over_id, 1),
    "trig_pair": (_trig_pair, 0),
    "hyp_pair": (_hyp_pair, 0),
    "exp_pair": (_exp_pair, 1),
}


def builtin_pair(name: str, params: list[float] | tuple = (),
                 interval: "Interval | tuple[float, float] | None" = None) -> GeneratorPair:
    """Look up a catalog pair; each entry carries a default interval on which
    the pair is four times differentiable with ``g'`` and ``(f'/g')'`` nonvanishing.

    >>> builtin_pair("quad_over_id", [1]).describe()
    'f=(x^2) g=x on (0.1, 10.0)'
    """
    try:
        builder, arity = CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown builtin pair {name!r}") from None
    params = [float(p) for p in params]
    if len(params) != arity:
        raise CatalogError(f"{name} takes {arity} parameter(s), got {len(params)}")
    f_text, g_text, default = builder(*params)
    if interval is None:
        interval = default
    lo, hi = (interval.lo, interval.hi) if isinstance(interval, Interval) else interval
    label = name if not params else f"{name}({', '.join(_format_number(p) for p in params)})"
    return GeneratorPair.from_text(f_text, g_text, lo, hi, label)
