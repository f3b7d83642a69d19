"""Property-based checks of the library invariants."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from meanscope.expr import (
    FUNCTIONS,
    Binary,
    Const,
    Unary,
    Var,
    builtin_pair,
    eval_expr,
    parse_expr,
    unparse,
)
from meanscope.jets import Jet, jet_arith, jet_compose, jet_variable, signed_cbrt_pow
from meanscope.means import bajraktarevic_mean, cauchy_mean, quasiarithmetic_mean
from meanscope.wronskian import discriminant_check, qa_expression_E, wronskian

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
unit = st.floats(-2.0, 2.0, allow_nan=False)
jets = st.builds(Jet, unit, unit, unit, unit, unit)

# ASTs ---------------------------------------------------------------------

consts = st.floats(0, 1e6, allow_nan=False).map(Const)
leaves = st.one_of(st.just(Var()), consts)


def _exprs(children):
    return st.one_of(
        st.builds(Unary, st.sampled_from(("neg",) + FUNCTIONS), children),
        st.builds(Binary, st.sampled_from("+-*/"), children, children),
        st.builds(Binary, st.just("^"), children, consts),
    )


exprs = st.recursive(leaves, _exprs, max_leaves=12)


@settings(max_examples=150)
@given(exprs)
def test_parse_unparse_round_trip(e):
    assert parse_expr(unparse(e)) == parse_expr(unparse(parse_expr(unparse(e))))
    assert unparse(parse_expr(unparse(e))) == unparse(e)


@given(exprs, st.floats(0.1, 3.0))
def test_evaluation_is_deterministic(e, x):
    try:
        first = eval_expr(e, jet_variable(x))
    except ArithmeticError:
        return
    assert tuple(first) == tuple(eval_expr(e, jet_variable(x)))


# Jets ---------------------------------------------------------------------

def _poly(j):
    return np.polynomial.Polynomial([j[k] / math.factorial(k) for k in range(5)])


def _derivs(p):
    return [p.deriv(k)(0.0) if k else p(0.0) for k in range(5)]


@given(jets, jets)
def test_leibniz_against_polynomial_product(a, b):
    ref = _derivs(_poly(a) * _poly(b))
    got = jet_arith("mul", a, b)
    scale = max(1.0, max(abs(v) for v in ref))
    for k in range(5):
        assert abs(got[k] - ref[k]) <= 1e-14 * 64 * scale


@given(jets, jets)
def test_division_inverts_multiplication(a, b):
    assume(abs(b.d0) > 0.5)
    back = jet_arith("mul", jet_arith("div", a, b), b)
    scale = max(1.0, max(abs(v) for v in a))
    for k in range(5):
        assert abs(back[k] - a[k]) <= 1e-12 * 100 * scale


@given(st.floats(1e-3, 1e3))
def test_exp_of_log_is_identity(x0):
    j = jet_compose("exp", jet_compose("log", jet_variable(x0)))
    # The order-k entry cancels terms of size x0^(1-k); measure against that.
    for k, want in enumerate((x0, 1, 0, 0, 0)):
        assert abs(j[k] - want) <= 1e-12 * max(abs(want), x0 ** (1 - k), 1.0)


@given(st.floats(-1e200, 1e200, allow_nan=False).filter(lambda u: u == 0 or abs(u) > 1e-200))
def test_signed_cube_root_cubes_back(u):
    assert signed_cbrt_pow(u, 3) == pytest.approx(u, rel=1e-14, abs=0)


# Means --------------------------------------------------------------------

MEAN_PAIRS = [builtin_pair("log_pair"), builtin_pair("hyp_pair"),
              builtin_pair("trig_pair"), builtin_pair("power_pair", [3, 1]),
              builtin_pair("exp_pair", [1])]
pair_index = st.integers(0, len(MEAN_PAIRS) - 1)
fraction = st.floats(0.0, 1.0)


def _point(pair, t):
    lo, hi = pair.interval.shrunk()
    return lo + t * (hi - lo)


@given(pair_index, fraction, fraction)
def test_cauchy_mean_value_and_symmetry(k, s, t):
    pair = MEAN_PAIRS[k]
    x, y = _point(pair, s), _point(pair, t)
    m = cauchy_mean(pair, x, y).value
    assert min(x, y) <= m <= max(x, y)
    if x != y and abs(x - y) > 1e-6:
        assert min(x, y) < m < max(x, y)
    assert cauchy_mean(pair, y, x).value == pytest.approx(m, abs=1e-12 * (1 + abs(m)))


@given(fraction, fraction, fraction)
def test_cauchy_mean_strictly_monotone(s, t, u):
    pair = MEAN_PAIRS[0]
    x, y, z = sorted(_point(pair, v) for v in (s, t, u))
    assume(y - x > 1e-3)
    assert cauchy_mean(pair, x, z).value < cauchy_mean(pair, y, z).value


@given(st.floats(0.1, 10), st.floats(0.1, 10))
def test_quasiarithmetic_mean_properties(x, y):
    m = quasiarithmetic_mean(math.log, x, y).value
    assert min(x, y) <= m <= max(x, y)
    assert m == pytest.approx(math.sqrt(x * y), rel=1e-12)
    assert quasiarithmetic_mean(math.log, y, x).value == pytest.approx(m, rel=1e-12)


@given(st.floats(0.1, 2.0), st.floats(0.1, 2.0))
def test_bajraktarevic_mean_properties(x, y):
    f, g = parse_expr("sinh(x)"), parse_expr("cosh(x)")
    m = bajraktarevic_mean(f, g, x, y).value
    assert min(x, y) <= m <= max(x, y)
    assert m == pytest.approx((x + y) / 2, abs=1e-12)
    assert bajraktarevic_mean(f, g, y, x).value == pytest.approx(m, abs=1e-12)


@given(pair_index, fraction, fraction)
def test_generator_curve_is_injective(k, s, t):
    pair = MEAN_PAIRS[k]
    x, y = _point(pair, s), _point(pair, t)
    assume(abs(x - y) >= 1e-3)
    (fx, gx), (fy, gy) = pair.values(x), pair.values(y)
    assert math.hypot(fx - fy, gx - gy) > 1e-10


# Wronskians ---------------------------------------------------------------

@given(pair_index, fraction, st.integers(0, 4), st.integers(0, 4))
def test_wronskian_antisymmetry(k, s, i, j):
    pair = MEAN_PAIRS[k]
    x = _point(pair, s)
    assert wronskian(pair, i, j, x) == -wronskian(pair, j, i, x)


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.sampled_from([-1, 1]),
       fraction)
def test_expression_invariant_under_unimodular_maps(a, b, c, det, s):
    # Choose d so that a d - b c = det.
    assume(a != 0 and (det + b * c) % a == 0)
    d = (det + b * c) // a
    base = builtin_pair("log_pair")
    moved = base.transformed(a, b, c, d)
    x = _point(base, s)
    assert qa_expression_E(moved, x) == pytest.approx(qa_expression_E(base, x), rel=1e-9)


@settings(max_examples=100)
@given(finite, finite, finite, finite)
def test_discriminant_identity(alpha, beta, gamma, u):
    d, residual = discriminant_check(alpha, beta, gamma, u)
    scale = max(1.0, beta * beta, abs(alpha * gamma), (abs(beta) + abs(gamma * u)) ** 2,
                abs(gamma) * (abs(alpha) + abs(beta * u) + abs(gamma * u * u)))
    assert residual <= 1e-12 * scale
