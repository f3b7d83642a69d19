"""Two-variable means: quasiarithmetic, Bajraktarevic and Cauchy.

All inversions are bracketed by ``[min(x, y), max(x, y)]``, which the mean
value property guarantees to contain the answer.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import (
    InversionError,
    JetError,
    NonMonotoneError,
    RegularityError,
    TargetOutsideBracketError,
)
from .expr import Expr, GeneratorPair, Interval, eval_value
from .sampling import chebyshev_grid, make_rng, random_points

EPS = sys.float_info.epsilon
INVERSION_RTOL = 1e-12
MAX_ITERATIONS = 200
DEFAULT_PROBES = 129


@dataclass(frozen=True)
class MeanValue:
    value: float
    bracket_used: tuple[float, float]
    iterations: int

    def __float__(self) -> float:
        return self.value


def sp_cp(p: float, x: float) -> tuple[float, float]:
    """Sine- and cosine-type solutions ``(S_p(x), C_p(x))`` of ``Y'' = p Y``."""
    if p < 0:
        r = math.sqrt(-p)
        return math.sin(r * x), math.cos(r * x)
    if p == 0:
        return float(x), 1.0
    r = math.sqrt(p)
    return math.sinh(r * x), math.cosh(r * x)


# Inversion ----------------------------------------------------------------

def _invert(fn: Callable[[float], float], target: float, lo: float, hi: float,
            slack: float = 0.0) -> tuple[float, int]:
    tol = INVERSION_RTOL * (1.0 + abs(target))
    # Iterate to near the rounding floor; fall back to ``tol`` only if the
    # bracket collapses first.
    strict = 4 * EPS * (1.0 + abs(target))
    if lo > hi:
        lo, hi = hi, lo
    f_lo, f_hi = fn(lo), fn(hi)
    if lo == hi:
        if abs(f_lo - target) <= tol + slack:
            return lo, 0
        raise TargetOutsideBracketError(f"target {target!r} not attained on degenerate bracket")
    if f_lo == f_hi:
        raise NonMonotoneError(f"function takes equal values at {lo!r} and {hi!r}")
    increasing = f_hi > f_lo
    low_val, high_val = (f_lo, f_hi) if increasing else (f_hi, f_lo)
    allowance = tol + slack
    if target < low_val:
        if low_val - target <= allowance:
            return (lo if increasing else hi), 0
        raise TargetOutsideBracketError(
            f"target {target!r} below image [{low_val!r}, {high_val!r}]")
    if target > high_val:
        if target - high_val <= allowance:
            return (hi if increasing else lo), 0
        raise TargetOutsideBracketError(
            f"target {target!r} above image [{low_val!r}, {high_val!r}]")

    # Residuals oriented so that r(a) <= 0 <= r(b).
    sign = 1.0 if increasing else -1.0
    a, b = lo, hi
    fa, fb = f_lo, f_hi
    ra, rb = sign * (f_lo - target), sign * (f_hi - target)
    if abs(ra) <= strict:
        return a, 0
    if abs(rb) <= strict:
        return b, 0
    side = 0
    bisect_next = False
    for it in range(1, MAX_ITERATIONS + 1):
        width = b - a
        if bisect_next or rb == ra:
            x = 0.5 * (a + b)
        else:
            # Illinois-weighted false position
            x = a - ra * (b - a) / (rb - ra)
        if not a < x < b:
            x = 0.5 * (a + b)
            if not a < x < b:
                ta, tb = abs(fa - target), abs(fb - target)
                best, resid = (a, ta) if ta <= tb else (b, tb)
                if resid <= tol:
                    return best, it
                raise InversionError(f"bracket collapsed with residual {resid!r}")
        fx = fn(x)
        if not min(fa, fb) <= fx <= max(fa, fb):
            raise NonMonotoneError(f"non-monotone sample at x={x!r}")
        rx = sign * (fx - target)
        if abs(rx) <= strict:
            return x, it
        if rx < 0:
            a, fa, ra = x, fx, rx
            if side == -1:
                rb *= 0.5
            side = -1
        else:
            b, fb, rb = x, fx, rx
            if side == 1:
                ra *= 0.5
            side = 1
        bisect_next = (b - a) > 0.5 * width
    raise InversionError(f"no convergence within {MAX_ITERATIONS} iterations")


def invert_monotone(fn: Callable[[float], float], target: float,
                    bracket: tuple[float, float]) -> float:
    """Solve ``fn(x) = target`` on ``bracket`` for continuous strictly monotone ``fn``.

    The returned ``x`` satisfies ``|fn(x) - target| <= 1e-12 * (1 + |target|)``.
    A sample outside the range spanned by the current bracket values raises
    :class:`NonMonotoneError`.
    """
    return _invert(fn, target, bracket[0], bracket[1])[0]


# Means --------------------------------------------------------------------

def _check_in(x: float, interval: Interval | None) -> None:
    if interval is not None and x not in interval:
        raise ValueError(f"{x!r} is outside ({interval.lo!r}, {interval.hi!r})")


def quasiarithmetic_mean(h: Callable[[float], float], x: float, y: float,
                         interval: Interval | None = None,
                         inverse: Callable[[float], float] | None = None) -> MeanValue:
    """``h^{-1}((h(x) + h(y)) / 2)``.

    ``inverse`` may supply a dedicated inverse of ``h`` (for example the
    Newton inversion of a tabulated representation); otherwise ``h`` is
    inverted by bracketed root finding.
    """
    _check_in(x, interval)
    _check_in(y, interval)
    lo, hi = min(x, y), max(x, y)
    if x == y:
        return MeanValue(x, (lo, hi), 0)
    target = 0.5 * (h(x) + h(y))
    if inverse is not None:
        return MeanValue(min(max(inverse(target), lo), hi), (lo, hi), 0)
    value, it = _invert(h, target, lo, hi)
    return MeanValue(value, (lo, hi), it)


def bajraktarevic_mean(f: Expr, g: Expr, x: float, y: float,
                       interval: Interval | None = None) -> MeanValue:
    """``(f/g)^{-1}((f(x) + f(y)) / (g(x) + g(y)))``."""
    _check_in(x, interval)
    _check_in(y, interval)
    lo, hi = min(x, y), max(x, y)
    if x == y:
        return MeanValue(x, (lo, hi), 0)

    def ratio(t: float) -> float:
        gt = eval_value(g, t)
        if gt == 0.0:
            raise RegularityError("g vanishes", point=t, tag="g_zero")
        return eval_value(f, t) / gt

    gx, gy = eval_value(g, x), eval_value(g, y)
    if gx == 0.0 or gy == 0.0:
        raise RegularityError("g vanishes", point=x if gx == 0.0 else y, tag="g_zero")
    target = (eval_value(f, x) + eval_value(f, y)) / (gx + gy)
    value, it = _invert(ratio, target, lo, hi, slack=8 * EPS * abs(target))
    return MeanValue(value, (lo, hi), it)


def derivative_ratio(pair: GeneratorPair, t: float) -> float:
    """``f'(t) / g'(t)``, from jets."""
    jf, jg = pair.jets(t)
    if jg.d1 == 0.0:
        raise RegularityError("g' vanishes", point=t, tag="g_prime_zero")
    return jf.d1 / jg.d1


def cauchy_mean(pair: GeneratorPair, x: float, y: float) -> MeanValue:
    """``(f'/g')^{-1}((f(x) - f(y)) / (g(x) - g(y)))``, and ``x`` on the diagonal."""
    lo, hi = min(x, y), max(x, y)
    if x == y:
        return MeanValue(x, (lo, hi), 0)
    fx, gx = pair.values(x)
    fy, gy = pair.values(y)
    dg = gx - gy
    if dg == 0.0:
        raise RegularityError("g takes equal values at two points", point=x, tag="g_not_injective")
    q = (fx - fy) / dg
    # Rounding in the difference quotient can nudge it just outside the image.
    df = fx - fy
    slack = 4 * EPS * abs(q) * (1.0 + (abs(fx) + abs(fy)) / max(abs(df), 1e-300)
                                + (abs(gx) + abs(gy)) / abs(dg))
    value, it = _invert(lambda t: derivative_ratio(pair, t), q, lo, hi, slack=slack)
    return MeanValue(value, (lo, hi), it)


# Regularity ---------------------------------------------------------------

@dataclass(frozen=True)
class RegularityWitness:
    point: float
    violated: str


@dataclass(frozen=True)
class RegularityReport:
    class_level: int
    witness: Optional[RegularityWitness] = None
    probes: int = 0


ZERO_RTOL = 1e-12


def _zero_witness(points, values) -> Optional[float]:
    """First probe where ``values`` is (relatively) zero or changes sign."""
    scale = max(abs(v) for v in values)
    if scale == 0.0:
        return points[0]
    for x, v in zip(points, values):
        if abs(v) <= ZERO_RTOL * scale:
            return x
    for k in range(len(values) - 1):
        if (values[k] > 0) != (values[k + 1] > 0):
            return points[k] if abs(values[k]) <= abs(values[k + 1]) else points[k + 1]
    return None


def _strictly_monotone(values) -> bool:
    inc = all(b > a for a, b in zip(values, values[1:]))
    dec = all(b < a for a, b in zip(values, values[1:]))
    return inc or dec


def check_regularity(pair: GeneratorPair, probes: int = DEFAULT_PROBES) -> RegularityReport:
    """Sampled membership in the regularity classes C_1 ... C_4.

    On ``probes`` Chebyshev points: all jets finite, ``g'`` nonzero, and
    ``(f'/g')' = W^{2,1} / g'^2`` nonzero with constant sign. Level 1 only
    needs ``f'/g'`` strictly monotone on the probes.
    """
    if probes < 16:
        raise ValueError("probes must be at least 16")
    pts = chebyshev_grid(pair.interval, probes)
    cap = 4
    cap_witness = None
    jets = []
    for x in pts:
        try:
            jets.append(pair.jets(x))
        except JetError as exc:
            if exc.order <= 2:
                return RegularityReport(0, RegularityWitness(x, "jet_error"), probes)
            if exc.order - 1 < cap:
                cap = exc.order - 1
                cap_witness = RegularityWitness(x, f"nonfinite_order_{exc.order}")
            jets.append(None)
    if cap < 4:
        # Higher orders are unusable somewhere; re-check lower conditions on
        # the probes where the jets exist.
        kept = [(x, j) for x, j in zip(pts, jets) if j is not None]
        if not kept:
            # Nothing left on which to confirm the low-order conditions.
            return RegularityReport(0, cap_witness, probes)
        pts = [x for x, _ in kept]
        jets = [j for _, j in kept]
    g1 = [jg.d1 for _, jg in jets]
    w = _zero_witness(pts, g1)
    if w is not None:
        return RegularityReport(0, RegularityWitness(w, "g_prime_zero"), probes)
    phi_prime = [(jf.d2 * jg.d1 - jf.d1 * jg.d2) / (jg.d1 * jg.d1) for jf, jg in jets]
    w = _zero_witness(pts, phi_prime)
    if w is not None:
        phi = [jf.d1 / jg.d1 for jf, jg in jets]
        level = 1 if _strictly_monotone(phi) else 0
        return RegularityReport(level, RegularityWitness(w, "phi_prime_zero"), probes)
    return RegularityReport(cap, cap_witness, probes)


# Bisymmetry ---------------------------------------------------------------

@dataclass(frozen=True)
class BisymmetryWitness:
    quadruple: tuple[float, float, float, float]
    left: float
    right: float
    deviation: float


def bisymmetry_sides(pair: GeneratorPair, quad) -> tuple[float, float]:
    """``C(C(x,y), C(u,v))`` and ``C(C(x,u), C(y,v))``."""
    x, y, u, v = quad
    c = lambda s, t: cauchy_mean(pair, s, t).value  # noqa: E731
    return c(c(x, y), c(u, v)), c(c(x, u), c(y, v))


def bisymmetry_test(pair: GeneratorPair, quadruples: int = 500, tol: float = 1e-4,
                    seed: int | None = None) -> Optional[BisymmetryWitness]:
    """Largest bisymmetry defect over random quadruples, if it exceeds ``tol``.

    Ties in deviation go to the lexicographically smallest quadruple.
    """
    rng = make_rng(seed)
    best = None
    best_key = None
    for _ in range(quadruples):
        quad = tuple(random_points(pair.interval, 4, rng))
        left, right = bisymmetry_sides(pair, quad)
        dev = abs(left - right)
        key = (-dev, quad)
        if best_key is None or key < best_key:
            best_key = key
            best = BisymmetryWitness(quad, left, right, dev)
    if best is None or best.deviation <= tol:
        return None
    return best
