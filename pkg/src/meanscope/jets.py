"""Order-4 jets: a value together with its first four ordinary derivatives.

Jets store ordinary derivatives ``(f, f', f'', f''', f'''')`` rather than
scaled Taylor coefficients, so Wronski-type determinants can read entries
directly. Every constructed jet is checked for finiteness; a non-finite
entry raises :class:`~meanscope.errors.JetError` instead of propagating NaN.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from .errors import DomainError, JetError

ORDER = 4


def _check_finite(d: Sequence[float]) -> None:
    for k, v in enumerate(d):
        if not math.isfinite(v):
            raise JetError(f"non-finite derivative of order {k}", order=k)


class Jet:
    """Immutable order-4 jet. Supports ``+ - * /`` with jets and floats."""

    __slots__ = ("d",)

    def __init__(self, d0: float, d1: float = 0.0, d2: float = 0.0,
                 d3: float = 0.0, d4: float = 0.0):
        d = (float(d0), float(d1), float(d2), float(d3), float(d4))
        _check_finite(d)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Jet is immutable")

    @classmethod
    def from_seq(cls, d: Sequence[float]) -> "Jet":
        return cls(*d)

    @property
    def d0(self) -> float:
        return self.d[0]

    @property
    def d1(self) -> float:
        return self.d[1]

    @property
    def d2(self) -> float:
        return self.d[2]

    @property
    def d3(self) -> float:
        return self.d[3]

    @property
    def d4(self) -> float:
        return self.d[4]

    def __getitem__(self, k: int) -> float:
        return self.d[k]

    def __iter__(self):
        return iter(self.d)

    def __len__(self) -> int:
        return ORDER + 1

    def __eq__(self, other) -> bool:
        if isinstance(other, Jet):
            return self.d == other.d
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.d)

    def __repr__(self) -> str:
        return "Jet(" + ", ".join(repr(v) for v in self.d) + ")"

    def shift(self) -> "Jet":
        """Jet of the derivative. The order-4 entry is unknown and zero-filled,
        so only orders 0..3 of the result are meaningful."""
        d = self.d
        return Jet(d[1], d[2], d[3], d[4], 0.0)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            return jet_arith("add", self, other)
        if isinstance(other, (int, float)):
            d = self.d
            return Jet(d[0] + other, d[1], d[2], d[3], d[4])
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet):
            return jet_arith("sub", self, other)
        if isinstance(other, (int, float)):
            d = self.d
            return Jet(d[0] - other, d[1], d[2], d[3], d[4])
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return jet_constant(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_arith("mul", self, other)
        if isinstance(other, (int, float)):
            return Jet(*(v * other for v in self.d))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_arith("div", self, other)
        if isinstance(other, (int, float)):
            if other == 0:
                raise DomainError("division by zero")
            return Jet(*(v / other for v in self.d))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, float)):
            return jet_arith("div", jet_constant(other), self)
        return NotImplemented

    def __neg__(self) -> "Jet":
        return Jet(*(-v for v in self.d))

    def __pos__(self) -> "Jet":
        return self


def jet_variable(x0: float) -> Jet:
    """Jet of the identity function at ``x0``."""
    return Jet(x0, 1.0, 0.0, 0.0, 0.0)


def jet_constant(c: float) -> Jet:
    return Jet(c, 0.0, 0.0, 0.0, 0.0)


ZERO = Jet(0.0)


def _mul(a, b):
    a0, a1, a2, a3, a4 = a
    b0, b1, b2, b3, b4 = b
    return (
        a0 * b0,
        a1 * b0 + a0 * b1,
        a2 * b0 + 2.0 * a1 * b1 + a0 * b2,
        a3 * b0 + 3.0 * a2 * b1 + 3.0 * a1 * b2 + a0 * b3,
        a4 * b0 + 4.0 * a3 * b1 + 6.0 * a2 * b2 + 4.0 * a1 * b3 + a0 * b4,
    )


def _div(a, b):
    # Solve a = q*b for the derivatives of q, order by order.
    a0, a1, a2, a3, a4 = a
    b0, b1, b2, b3, b4 = b
    if b0 == 0.0:
        raise DomainError("division by zero")
    q0 = a0 / b0
    q1 = (a1 - q0 * b1) / b0
    q2 = (a2 - 2.0 * q1 * b1 - q0 * b2) / b0
    q3 = (a3 - 3.0 * q2 * b1 - 3.0 * q1 * b2 - q0 * b3) / b0
    q4 = (a4 - 4.0 * q3 * b1 - 6.0 * q2 * b2 - 4.0 * q1 * b3 - q0 * b4) / b0
    return (q0, q1, q2, q3, q4)


def jet_arith(op: str, a: Jet, b: Jet) -> Jet:
    """Combine two jets with ``op`` in ``{"add", "sub", "mul", "div"}``."""
    if op == "add":
        return Jet(*(x + y for x, y in zip(a.d, b.d)))
    if op == "sub":
        return Jet(*(x - y for x, y in zip(a.d, b.d)))
    if op == "mul":
        return Jet(*_mul(a.d, b.d))
    if op == "div":
        return Jet(*_div(a.d, b.d))
    raise ValueError(f"unknown jet operation {op!r}")


def compose_derivatives(fd: Sequence[float], a: Jet) -> Jet:
    """Chain rule through order 4 (Faa di Bruno).

    ``fd`` holds the outer function's value and derivatives at ``a.d0``.
    """
    f0, f1, f2, f3, f4 = fd
    _, u1, u2, u3, u4 = a.d
    u1s = u1 * u1
    return Jet(
        f0,
        f1 * u1,
        f2 * u1s + f1 * u2,
        f3 * u1s * u1 + 3.0 * f2 * u1 * u2 + f1 * u3,
        f4 * u1s * u1s + 6.0 * f3 * u1s * u2
        + f2 * (3.0 * u2 * u2 + 4.0 * u1 * u3) + f1 * u4,
    )


def _power_derivatives(c: float, r: float) -> tuple:
    # d^k/dx^k x^r = r (r-1) ... (r-k+1) x^(r-k), for x > 0
    out = []
    coef = 1.0
    for k in range(ORDER + 1):
        out.append(coef * c ** (r - k))
        coef *= r - k
    return tuple(out)


def _d_exp(c):
    e = math.exp(c)
    return (e, e, e, e, e)


def _d_log(c):
    if c <= 0.0:
        raise DomainError("log of nonpositive value")
    inv = 1.0 / c
    return (math.log(c), inv, -inv * inv, 2.0 * inv ** 3, -6.0 * inv ** 4)


def _d_sin(c):
    s, co = math.sin(c), math.cos(c)
    return (s, co, -s, -co, s)


def _d_cos(c):
    s, co = math.sin(c), math.cos(c)
    return (co, -s, -co, s, co)


def _d_sinh(c):
    s, ch = math.sinh(c), math.cosh(c)
    return (s, ch, s, ch, s)


def _d_cosh(c):
    s, ch = math.sinh(c), math.cosh(c)
    return (ch, s, ch, s, ch)


def _d_sqrt(c):
    if c <= 0.0:
        raise DomainError("sqrt of nonpositive value")
    return _power_derivatives(c, 0.5)


def _d_abs(c):
    if c == 0.0:
        raise DomainError("abs is not differentiable at 0")
    return (abs(c), math.copysign(1.0, c), 0.0, 0.0, 0.0)


def _d_cbrt(c):
    if c == 0.0:
        raise DomainError("cube root is not differentiable at 0")
    s = signed_cbrt_pow(c, 1)
    return (
        s,
        (1.0 / 3.0) / s ** 2,
        -(2.0 / 9.0) / s ** 5,
        (10.0 / 27.0) / s ** 8,
        -(80.0 / 81.0) / s ** 11,
    )


ELEMENTARY: dict[str, Callable[[float], tuple]] = {
    "exp": _d_exp,
    "log": _d_log,
    "sin": _d_sin,
    "cos": _d_cos,
    "sinh": _d_sinh,
    "cosh": _d_cosh,
    "sqrt": _d_sqrt,
    "abs": _d_abs,
    "cbrt": _d_cbrt,
}


def jet_compose(func: str, a: Jet) -> Jet:
    """Jet of ``func(a)`` for an elementary function name.

    ``cbrt`` is the signed (odd) cube root; it is not part of the expression
    grammar but is used to differentiate ``(W^{2,1})^{1/3}``.
    """
    try:
        table = ELEMENTARY[func]
    except KeyError:
        raise ValueError(f"unknown elementary function {func!r}") from None
    try:
        fd = table(a.d0)
    except OverflowError:
        raise JetError(f"overflow in {func}", order=0) from None
    return compose_derivatives(fd, a)


def jet_pow(a: Jet, r: float) -> Jet:
    """``a ** r``. Integer ``r`` uses repeated multiplication; otherwise the
    base value must be positive."""
    if float(r).is_integer() and abs(r) <= 64:
        n = int(r)
        out = _int_pow(a, abs(n))
        return jet_arith("div", jet_constant(1.0), out) if n < 0 else out
    if a.d0 <= 0.0:
        raise DomainError("non-integer power of nonpositive value")
    return compose_derivatives(_power_derivatives(a.d0, r), a)


def _int_pow(a: Jet, n: int) -> Jet:
    result = jet_constant(1.0)
    base = a
    first = True
    while n:
        if n & 1:
            result = base if first else result * base
            first = False
        n >>= 1
        if n:
            base = base * base
    return result


def signed_cbrt_pow(u: float, k: int) -> float:
    """``s**k`` where ``s`` is the real (signed) cube root of ``u``.

    ``k=2`` gives ``|u|**(2/3)``; odd ``k`` keeps the sign of ``u``.
    """
    if u == 0.0:
        return 0.0
    s = math.copysign(abs(u) ** (1.0 / 3.0), u)
    # One Newton step on s^3 = u recovers the last ulp lost by pow.
    s -= (s * s * s - u) / (3.0 * s * s)
    return s ** k
