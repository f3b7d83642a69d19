import math

import pytest

from meanscope.errors import (
    CatalogError,
    DomainError,
    EmptyExpressionError,
    ExprSyntaxError,
    UnknownIdentifierError,
)
from meanscope.expr import (
    CATALOG,
    Binary,
    Const,
    GeneratorPair,
    Interval,
    Unary,
    Var,
    builtin_pair,
    eval_expr,
    eval_value,
    parse_expr,
    unparse,
)
from meanscope.jets import jet_variable


def test_parse_variable():
    assert parse_expr("x") == Var()


def test_parse_polynomial_structure():
    e = parse_expr("x^2 - 3*x")
    assert e == Binary("-", Binary("^", Var(), Const(2.0)), Binary("*", Const(3.0), Var()))
    assert unparse(e) == "((x^2)-(3*x))"


def test_parse_function_quotient():
    e = parse_expr("sinh(2*x)/x")
    assert e == Binary("/", Unary("sinh", Binary("*", Const(2.0), Var())), Var())


def test_unclosed_parenthesis_offset():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr("log(x")
    assert info.value.offset == 6


@pytest.mark.parametrize("text", ["", "   "])
def test_empty_input(text):
    with pytest.raises(EmptyExpressionError):
        parse_expr(text)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse_expr("2*tan(x)")
    assert info.value.offset == 3


@pytest.mark.parametrize("text", ["x +", "x ** 2", "(x", "x)", "2 3", "x^x", "sin x", "1.2.3"])
def test_malformed(text):
    with pytest.raises(ExprSyntaxError):
        parse_expr(text)


def test_precedence_and_associativity():
    assert eval_value(parse_expr("2^3^2"), 0.0) == 512.0
    assert eval_value(parse_expr("-x^2"), 3.0) == -9.0
    assert eval_value(parse_expr("8/4/2"), 0.0) == 1.0
    assert eval_value(parse_expr("1-2-3"), 0.0) == -4.0
    assert eval_value(parse_expr("x^-1"), 4.0) == 0.25
    assert eval_value(parse_expr("2*pi - e"), 0.0) == 2 * math.pi - math.e


def test_jet_examples():
    assert tuple(eval_expr(parse_expr("x"), jet_variable(2.0))) == (2, 1, 0, 0, 0)
    assert tuple(eval_expr(parse_expr("x^2"), jet_variable(3.0))) == (9, 6, 2, 0, 0)
    got = eval_expr(parse_expr("log(x)"), jet_variable(2.0))
    assert got[0] == pytest.approx(math.log(2), rel=1e-15)
    assert tuple(got)[1:] == pytest.approx((0.5, -0.25, 0.25, -0.375), rel=1e-15)


def test_float_and_jet_paths_agree():
    e = parse_expr("sqrt(x)*exp(-x/3) + cosh(x)^2 - abs(x-5)")
    for x in (0.3, 1.7, 4.2):
        assert eval_expr(e, x).d0 == pytest.approx(eval_value(e, x), rel=1e-15)


def test_domain_errors_carry_point():
    with pytest.raises(DomainError) as info:
        eval_value(parse_expr("log(x)"), -1.0)
    assert info.value.point == -1.0
    with pytest.raises(DomainError):
        eval_expr(parse_expr("sqrt(x)"), 0.0)
    with pytest.raises(DomainError):
        eval_expr(parse_expr("x^0.5"), -2.0)


def test_integer_power_of_negative_base():
    assert eval_value(parse_expr("x^3"), -2.0) == -8.0
    assert tuple(eval_expr(parse_expr("x^-2"), -1.0)) == pytest.approx((1, 2, 6, 24, 120))


def test_interval_validation_and_margin():
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)
    with pytest.raises(ValueError):
        Interval(0.0, math.inf)
    iv = Interval(0.0, 10.0)
    assert iv.shrunk() == pytest.approx((0.01, 9.99))
    assert 0.0 not in iv and 5.0 in iv


def test_catalog_examples():
    p = builtin_pair("quad_over_id", [1])
    assert (unparse(p.f), unparse(p.g)) == ("(x^2)", "x")
    assert (p.interval.lo, p.interval.hi) == (0.1, 10.0)
    t = builtin_pair("trig_pair")
    assert (t.interval.lo, t.interval.hi) == (-1.2, 1.2)
    assert eval_value(t.f, 0.3) == -math.cos(0.3)
    lp = builtin_pair("log_pair")
    assert (unparse(lp.f), unparse(lp.g), lp.interval.lo, lp.interval.hi) == ("x", "log(x)", 1.0, 2.0)


def test_catalog_interval_override():
    p = builtin_pair("quad_over_id", [2], (0.5, 4))
    assert (p.interval.lo, p.interval.hi) == (0.5, 4.0)
    assert builtin_pair("quad_over_id", [2], Interval(0.5, 4)).interval == p.interval


@pytest.mark.parametrize("name,params", [("nope", []), ("quad_over_id", []), ("quad_over_id", [0]),
                                         ("power_pair", [2, 2]), ("exp_pair", [0])])
def test_catalog_errors(name, params):
    with pytest.raises(CatalogError):
        builtin_pair(name, params)


CATALOG_SAMPLES = [("power_pair", [3, 1]), ("power_pair", [-1, 2]), ("log_pair", []),
                   ("quad_over_id", [0.5]), ("quad_over_id", [-1]), ("trig_pair", []),
                   ("hyp_pair", []), ("exp_pair", [1]), ("exp_pair", [-0.5])]


@pytest.mark.parametrize("name,params", CATALOG_SAMPLES)
def test_catalog_round_trip(name, params):
    p = builtin_pair(name, params)
    for e in (p.f, p.g):
        assert parse_expr(unparse(e)) == e


def test_catalog_covers_every_entry():
    assert {n for n, _ in CATALOG_SAMPLES} == set(CATALOG)


def test_transformed_pair():
    p = builtin_pair("log_pair")
    q = p.transformed(2, -1, 1, 1)
    assert parse_expr(unparse(q.f)) == q.f
    x = 1.4
    f, g = p.values(x)
    assert q.values(x) == pytest.approx((2 * f - g, f + g), rel=1e-15)
    with pytest.raises(ValueError):
        p.transformed(1, 2, 2, 4)


def test_from_text_and_describe():
    p = GeneratorPair.from_text("x^2", "x", 1, 3)
    assert p.describe() == "f=(x^2) g=x on (1.0, 3.0)"
