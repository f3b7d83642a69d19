"""Decide whether a Cauchy mean is quasiarithmetic and reconstruct its generator.

The detector runs three independent criteria (constancy of the fourth-order
invariant E, a conic through the range of ``(f, g)``, and a quadratic form
in ``(f', g')``), demands that they agree, and on a unanimous YES builds
``h = integral of (W^{2,1})^{1/3}`` and checks ``C_{f,g} = A_h`` directly.
"""

from __future__ import annotations

import bisect
import enum
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

from .errors import MeanscopeError, RegularityError
from .expr import GeneratorPair, Interval
from .jets import Jet, jet_compose, signed_cbrt_pow
from .means import (
    BisymmetryWitness,
    RegularityReport,
    bisymmetry_test,
    cauchy_mean,
    check_regularity,
    quasiarithmetic_mean,
)
from .sampling import chebyshev_grid, default_seed, uniform_grid
from .wronskian import (
    CONSTANCY_TOL_ABS,
    CONSTANCY_TOL_REL,
    FIT_RESIDUAL_TOL,
    BajraktarevicCheck,
    ConicCoefficients,
    ExpressionProfile,
    QuadraticFormFit,
    bajraktarevic_checks,
    estimate_p,
    expression_profile,
    fit_conic,
    fit_quadratic_form,
    wronskian_from_jets,
)

EPS = sys.float_info.epsilon
SIMPSON_SUBPANELS = 8


class Verdict(str, enum.Enum):
    QUASIARITHMETIC = "QUASIARITHMETIC"
    NOT_QUASIARITHMETIC = "NOT_QUASIARITHMETIC"
    INCONCLUSIVE = "INCONCLUSIVE"


# Representation h ---------------------------------------------------------

@dataclass(frozen=True)
class RepresentationTable:
    """Tabulated ``h`` with exact node slopes ``h' = cbrt(W^{2,1})``.

    Values between nodes come from cubic Hermite interpolation; ``h`` is
    anchored to 0 at the first node.
    """

    xs: tuple[float, ...]
    hs: tuple[float, ...]
    slopes: tuple[float, ...]
    interval: Interval

    @property
    def nodes(self) -> list[tuple[float, float, float]]:
        return list(zip(self.xs, self.hs, self.slopes))

    @property
    def increasing(self) -> bool:
        return self.slopes[0] > 0

    def _segment(self, x: float) -> int:
        xs = self.xs
        if not xs[0] - 4 * EPS * abs(xs[0]) <= x <= xs[-1] + 4 * EPS * abs(xs[-1]):
            raise ValueError(f"{x!r} outside the tabulated range [{xs[0]!r}, {xs[-1]!r}]")
        k = bisect.bisect_right(xs, x) - 1
        return min(max(k, 0), len(xs) - 2)

    def _hermite(self, k: int, x: float) -> tuple[float, float]:
        x0, x1 = self.xs[k], self.xs[k + 1]
        y0, y1 = self.hs[k], self.hs[k + 1]
        m0, m1 = self.slopes[k], self.slopes[k + 1]
        dx = x1 - x0
        t = (x - x0) / dx
        t2, t3 = t * t, t * t * t
        value = ((2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * dx * m0
                 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * dx * m1)
        slope = ((6 * t2 - 6 * t) * (y0 - y1) / dx + (3 * t2 - 4 * t + 1) * m0
                 + (3 * t2 - 2 * t) * m1)
        return value, slope

    def __call__(self, x: float) -> float:
        return self._hermite(self._segment(x), x)[0]

    def derivative(self, x: float) -> float:
        return self._hermite(self._segment(x), x)[1]

    def inverse(self, value: float) -> float:
        """Safeguarded Newton on the interpolant, bisection fallback."""
        hs = self.hs if self.increasing else tuple(-h for h in self.hs)
        v = value if self.increasing else -value
        if not hs[0] - 1e-12 * (1 + abs(hs[0])) <= v <= hs[-1] + 1e-12 * (1 + abs(hs[-1])):
            raise ValueError(f"{value!r} outside the range of h")
        k = min(max(bisect.bisect_right(hs, v) - 1, 0), len(hs) - 2)
        a, b = self.xs[k], self.xs[k + 1]
        x = a + (b - a) * (v - hs[k]) / (hs[k + 1] - hs[k])
        x = min(max(x, a), b)
        for _ in range(60):
            hx, dh = self._hermite(k, x)
            r = hx - value
            if (r > 0) == self.increasing:
                b = x
            else:
                a = x
            step = r / dh if dh != 0.0 else math.inf
            new = x - step
            if not a <= new <= b:
                new = 0.5 * (a + b)
            if abs(new - x) <= 2 * EPS * max(abs(x), 1e-300) or a == b:
                return new
            x = new
        return x


def _w21(pair: GeneratorPair, x: float) -> float:
    jf, jg = pair.jets(x)
    return wronskian_from_jets(jf, jg, 2, 1)


def build_h(pair: GeneratorPair, n_nodes: int = 513) -> RepresentationTable:
    """Tabulate ``h = integral of cbrt(W^{2,1})`` on a uniform grid over the
    shrunk interval (composite Simpson, 8 sub-panels per node gap)."""
    if n_nodes < 64:
        raise ValueError("n_nodes must be at least 64")
    xs = uniform_grid(pair.interval, n_nodes)
    slopes = []
    for x in xs:
        w = _w21(pair, x)
        if w == 0.0:
            raise RegularityError("W^{2,1} vanishes", point=x, tag="w21_zero")
        if slopes and (w > 0) != (slopes[0] > 0):
            raise RegularityError("W^{2,1} changes sign", point=x, tag="w21_sign_change")
        slopes.append(signed_cbrt_pow(w, 1))
    hs = [0.0]
    n = SIMPSON_SUBPANELS
    for k in range(n_nodes - 1):
        a, b = xs[k], xs[k + 1]
        step = (b - a) / n
        vals = [slopes[k]]
        for i in range(1, n):
            w = _w21(pair, a + i * step)
            if (w > 0) != (slopes[0] > 0) or w == 0.0:
                raise RegularityError("W^{2,1} changes sign", point=a + i * step,
                                      tag="w21_sign_change")
            vals.append(signed_cbrt_pow(w, 1))
        vals.append(slopes[k + 1])
        acc = vals[0] + vals[-1] + 4 * math.fsum(vals[1:-1:2]) + 2 * math.fsum(vals[2:-1:2])
        hs.append(hs[-1] + acc * step / 3.0)
    increasing = slopes[0] > 0
    if any((h1 > h0) != increasing or h1 == h0 for h0, h1 in zip(hs, hs[1:])):
        raise MeanscopeError("tabulated h is not strictly monotone")
    return RepresentationTable(tuple(xs), tuple(hs), tuple(slopes), pair.interval)


def verify_equality(pair: GeneratorPair, table: RepresentationTable, grid_n: int = 50) -> float:
    """Max of ``|C_{f,g}(x, y) - A_h(x, y)|`` over grid points ``x < y``."""
    grid = uniform_grid(pair.interval, grid_n)
    worst = 0.0
    for i, x in enumerate(grid):
        for y in grid[i + 1:]:
            c = cauchy_mean(pair, x, y).value
            a = quasiarithmetic_mean(table, x, y, inverse=table.inverse).value
            worst = max(worst, abs(c - a))
    return worst


def normalized_derivatives(pair: GeneratorPair, x: float) -> tuple[Jet, Jet]:
    """Jets of ``F = f'/h'`` and ``G = g'/h'`` with ``h' = cbrt(W^{2,1})``.

    Each derivative costs one jet order, so only orders 0..2 are meaningful.
    """
    jf, jg = pair.jets(x)
    f1, g1 = jf.shift(), jg.shift()
    f2, g2 = f1.shift(), g1.shift()
    hp = jet_compose("cbrt", f2 * g1 - f1 * g2)
    return f1 / hp, g1 / hp


# Detection ----------------------------------------------------------------

@dataclass(frozen=True)
class DetectorConfig:
    probes: int = 129
    profile_points: int = 201
    fit_samples: int = 129
    constancy_tol_abs: float = CONSTANCY_TOL_ABS
    constancy_tol_rel: float = CONSTANCY_TOL_REL
    fit_tol: float = FIT_RESIDUAL_TOL
    h_nodes: int = 513
    equality_grid: int = 50
    equality_tol: float = 1e-7
    bisymmetry_quadruples: int = 500
    bisymmetry_tol: float = 1e-9
    seed: Optional[int] = None

    def resolved_seed(self) -> int:
        return default_seed() if self.seed is None else self.seed


@dataclass(frozen=True)
class ExpressionWitness:
    """Two grid points where E differs; re-evaluating E there reproduces ``spread``."""
    x_min: float
    e_min: float
    x_max: float
    e_max: float

    @property
    def spread(self) -> float:
        return self.e_max - self.e_min


@dataclass
class DetectionReport:
    verdict: Verdict
    pair: GeneratorPair
    regularity: RegularityReport
    conic: Optional[ConicCoefficients] = None
    quad_form: Optional[QuadraticFormFit] = None
    profile: Optional[ExpressionProfile] = None
    p_estimate: Optional[float] = None
    equality_max_dev: Optional[float] = None
    bisymmetry_witness: Optional[BisymmetryWitness] = None
    expression_witness: Optional[ExpressionWitness] = None
    bajraktarevic: Optional[BajraktarevicCheck] = None
    table: Optional[RepresentationTable] = None
    criteria: dict = field(default_factory=dict)
    criteria_agreement: bool = False
    notes: list = field(default_factory=list)
    config: DetectorConfig = field(default_factory=DetectorConfig)

    @property
    def has_witness(self) -> bool:
        return self.expression_witness is not None or self.bisymmetry_witness is not None or (
            self.conic is not None and not self.conic.is_fit(self.config.fit_tol))


def detect(pair: GeneratorPair, config: DetectorConfig | None = None) -> DetectionReport:
    """Classify the Cauchy mean of ``pair``. Failures never raise; they end
    up as an INCONCLUSIVE report with notes."""
    config = config or DetectorConfig()
    reg = check_regularity(pair, config.probes)
    report = DetectionReport(Verdict.INCONCLUSIVE, pair, reg, config=config)
    if reg.class_level < 4:
        report.notes.append(f"pair is only in sampled class C_{reg.class_level}")
        return report

    try:
        profile = expression_profile(pair, config.profile_points,
                                     config.constancy_tol_abs, config.constancy_tol_rel)
        conic = fit_conic(pair, config.fit_samples)
        qform = fit_quadratic_form(pair, config.fit_samples)
    except MeanscopeError as exc:
        report.notes.append(f"criterion evaluation failed: {exc}")
        return report
    report.profile, report.conic, report.quad_form = profile, conic, qform

    votes = {
        "conic": conic.is_fit(config.fit_tol),
        "quadratic_form": qform.is_fit(config.fit_tol),
        "expression_constant": profile.constancy,
    }
    report.criteria = votes
    report.criteria_agreement = len(set(votes.values())) == 1
    if conic.residual <= config.fit_tol and not conic.is_fit(config.fit_tol):
        report.notes.append("conic residual is small but the fitted conic is degenerate")

    if not report.criteria_agreement:
        report.notes.append("criteria disagree: " + ", ".join(
            f"{k}={'yes' if v else 'no'}" for k, v in votes.items()))
        return report

    if all(votes.values()):
        report.p_estimate = estimate_p(profile)
        try:
            table = build_h(pair, config.h_nodes)
            report.table = table
            report.equality_max_dev = verify_equality(pair, table, config.equality_grid)
            grid = chebyshev_grid(pair.interval, config.fit_samples)
            report.bajraktarevic = bajraktarevic_checks(
                lambda x: normalized_derivatives(pair, x)[0],
                lambda x: normalized_derivatives(pair, x)[1],
                grid,
            )
        except MeanscopeError as exc:
            report.notes.append(f"constructive check failed: {exc}")
            return report
        if report.equality_max_dev <= config.equality_tol:
            report.verdict = Verdict.QUASIARITHMETIC
        else:
            report.notes.append(
                f"C != A_h: max deviation {report.equality_max_dev:.3e} exceeds "
                f"{config.equality_tol:.1e}")
        return report

    report.expression_witness = ExpressionWitness(
        profile.argmin, profile.min, profile.argmax, profile.max)
    try:
        report.bisymmetry_witness = bisymmetry_test(
            pair, config.bisymmetry_quadruples, config.bisymmetry_tol, config.resolved_seed())
    except MeanscopeError as exc:
        report.notes.append(f"bisymmetry test failed: {exc}")
    report.verdict = Verdict.NOT_QUASIARITHMETIC
    return report
