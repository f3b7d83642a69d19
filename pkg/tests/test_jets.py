import math

import mpmath as mp
import pytest

from meanscope.errors import DomainError, JetError
from meanscope.expr import Interval, builtin_pair, eval_expr, parse_expr
from meanscope.jets import (
    ELEMENTARY,
    ZERO,
    Jet,
    jet_arith,
    jet_compose,
    jet_constant,
    jet_pow,
    jet_variable,
    signed_cbrt_pow,
)
from meanscope.sampling import make_rng, random_points
from oracles import close_to_fd, expr_derivative, fd_derivative


def test_variable_jet():
    assert tuple(jet_variable(1.5)) == (1.5, 1.0, 0.0, 0.0, 0.0)


def test_mul_square():
    j = Jet(2, 1, 0, 0, 0)
    assert tuple(jet_arith("mul", j, j)) == (4, 4, 2, 0, 0)


def test_add_zero_identity():
    j = Jet(1.5, -2, 3, 0.25, 7)
    assert jet_arith("add", j, ZERO) == j


def test_div_reciprocal():
    got = jet_arith("div", Jet(1, 0, 0, 0, 0), Jet(2, 1, 0, 0, 0))
    assert tuple(got) == (0.5, -0.25, 0.25, -0.375, 0.75)


def test_compose_exp_and_sin_at_zero():
    assert tuple(jet_compose("exp", jet_variable(0.0))) == (1, 1, 1, 1, 1)
    assert tuple(jet_compose("sin", jet_variable(0.0))) == (0, 1, 0, -1, 0)


@pytest.mark.parametrize("func", sorted(ELEMENTARY))
def test_compose_constant_jet(func):
    c = 0.7
    got = jet_compose(func, jet_constant(c))
    assert got.d0 == pytest.approx(ELEMENTARY[func](c)[0], rel=1e-15)
    assert tuple(got)[1:] == (0, 0, 0, 0)


def test_signed_cbrt_pow_examples():
    assert signed_cbrt_pow(-8, 1) == -2
    assert signed_cbrt_pow(-8, 2) == 4
    assert signed_cbrt_pow(1, 8) == 1
    assert signed_cbrt_pow(0.0, 5) == 0.0
    assert signed_cbrt_pow(27.0, -1) == pytest.approx(1 / 3, rel=1e-15)


def test_nonfinite_is_an_error():
    with pytest.raises(JetError):
        Jet(1.0, math.nan)
    with pytest.raises(JetError) as info:
        Jet(1e308) * Jet(1e308)
    assert info.value.order == 0
    with pytest.raises(JetError):
        jet_compose("exp", jet_variable(1000.0))


def test_domain_errors():
    with pytest.raises(DomainError):
        jet_compose("log", jet_variable(0.0))
    with pytest.raises(DomainError):
        jet_compose("abs", jet_variable(0.0))
    with pytest.raises(DomainError):
        jet_arith("div", jet_variable(1.0), ZERO)
    with pytest.raises(DomainError):
        jet_pow(jet_variable(-1.0), 0.5)


def test_immutable():
    j = jet_variable(1.0)
    with pytest.raises(AttributeError):
        j.d = (0, 0, 0, 0, 0)


def test_shift_is_derivative():
    j = jet_compose("sin", jet_variable(0.4))
    s = j.shift()
    assert tuple(s)[:4] == tuple(j)[1:] and s.d4 == 0.0


def test_scalar_operators():
    j = jet_variable(2.0)
    assert tuple(3 - j) == (1, -1, 0, 0, 0)
    assert tuple(1 / j) == (0.5, -0.25, 0.25, -0.375, 0.75)
    assert tuple(j * 2 + 1) == (5, 2, 0, 0, 0)
    assert tuple(-j) == (-2, -1, 0, 0, 0)


def test_integer_and_real_powers():
    j = jet_variable(1.5)
    assert jet_pow(j, 3) == j * j * j
    real = jet_pow(j, 0.5)
    assert tuple(real) == pytest.approx(tuple(jet_compose("sqrt", j)), rel=1e-15)


ELEMENTARY_EXPRS = ["exp(x)", "log(x)", "sin(x)", "cos(x)", "sinh(x)", "cosh(x)", "sqrt(x)",
                    "abs(x - 3)", "x^-2.5", "x^7"]


@pytest.mark.parametrize("text", ELEMENTARY_EXPRS)
def test_elementary_against_finite_differences(text):
    e = parse_expr(text)
    for x in random_points(Interval(0.2, 2.9), 10, make_rng(7)):
        jet = eval_expr(e, x)
        for k in range(1, 5):
            assert close_to_fd(jet[k], expr_derivative(e, x, k))


def test_cbrt_derivatives_against_finite_differences():
    for x in (-2.3, -0.4, 0.6, 5.0):
        jet = jet_compose("cbrt", jet_variable(x))
        fn = lambda t: mp.sign(t) * abs(t) ** (mp.mpf(1) / 3)  # noqa: E731
        for k in range(1, 5):
            ref = float(fd_derivative(fn, x, k))
            assert jet[k] == pytest.approx(ref, rel=1e-6)


def test_catalog_pair_jets_spot_check():
    p = builtin_pair("hyp_pair")
    jf, jg = p.jets(2.0)
    # f = (x + 1/x)/2, g = (x - 1/x)/2
    assert tuple(jf) == pytest.approx((1.25, 0.375, 0.125, -0.1875, 0.375), rel=1e-15)
    assert tuple(jg) == pytest.approx((0.75, 0.625, -0.125, 0.1875, -0.375), rel=1e-15)
