"""Detect quasiarithmetic Cauchy means from the Wronski-type determinants of
their generators."""

from .detector import (
    DetectionReport,
    DetectorConfig,
    RepresentationTable,
    Verdict,
    build_h,
    detect,
    verify_equality,
)
from .errors import (
    DomainError,
    ExprSyntaxError,
    InversionError,
    JetError,
    MeanscopeError,
    RegularityError,
)
from .expr import GeneratorPair, Interval, builtin_pair, eval_expr, parse_expr, unparse
from .jets import Jet, jet_variable
from .means import (
    bajraktarevic_mean,
    bisymmetry_test,
    cauchy_mean,
    check_regularity,
    quasiarithmetic_mean,
)
from .report import emit_report
from .wronskian import (
    bajraktarevic_checks,
    check_ode_lemma,
    discriminant_check,
    estimate_p,
    expression_profile,
    fit_conic,
    fit_quadratic_form,
    qa_expression_E,
    wronskian,
)

__all__ = [
    "DetectionReport",
    "DetectorConfig",
    "DomainError",
    "ExprSyntaxError",
    "GeneratorPair",
    "Interval",
    "InversionError",
    "Jet",
    "JetError",
    "MeanscopeError",
    "RegularityError",
    "RepresentationTable",
    "Verdict",
    "bajraktarevic_checks",
    "bajraktarevic_mean",
    "bisymmetry_test",
    "build_h",
    "builtin_pair",
    "cauchy_mean",
    "check_ode_lemma",
    "check_regularity",
    "detect",
    "discriminant_check",
    "emit_report",
    "estimate_p",
    "eval_expr",
    "expression_profile",
    "fit_conic",
    "fit_quadratic_form",
    "jet_variable",
    "parse_expr",
    "qa_expression_E",
    "quasiarithmetic_mean",
    "unparse",
    "verify_equality",
    "wronskian",
]
__version__ = "0.1.0"
