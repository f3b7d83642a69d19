"""Wronski-type determinants of a generator pair and the criteria built on them.

``W^{i,j} = f^(i) g^(j) - f^(j) g^(i)``, with derivatives read from jets.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import RegularityError
from .expr import GeneratorPair
from .jets import Jet, signed_cbrt_pow
from .linalg import column_rms, det3, gram, jacobi_eigh, lstsq_normal, norm, rms
from .sampling import chebyshev_grid

CONSTANCY_TOL_ABS = 1e-8
CONSTANCY_TOL_REL = 1e-6
FIT_RESIDUAL_TOL = 1e-7
DEGENERACY_TOL = 1e-10


def wronskian_from_jets(jf: Jet, jg: Jet, i: int, j: int) -> float:
    return jf[i] * jg[j] - jf[j] * jg[i]


def wronskian(pair: GeneratorPair, i: int, j: int, x: float) -> float:
    if not (0 <= i <= 4 and 0 <= j <= 4):
        raise ValueError("orders must lie in 0..4")
    jf, jg = pair.jets(x)
    return wronskian_from_jets(jf, jg, i, j)


def _e_from_jets(jf: Jet, jg: Jet, x: float) -> float:
    w21 = wronskian_from_jets(jf, jg, 2, 1)
    if w21 == 0.0:
        raise RegularityError("W^{2,1} vanishes", point=x, tag="w21_zero")
    w31 = wronskian_from_jets(jf, jg, 3, 1)
    w41 = wronskian_from_jets(jf, jg, 4, 1)
    w32 = wronskian_from_jets(jf, jg, 3, 2)
    return ((3.0 * w41 + 12.0 * w32) / signed_cbrt_pow(w21, 5)
            - 5.0 * w31 * w31 / signed_cbrt_pow(w21, 8))


def qa_expression_E(pair: GeneratorPair, x: float) -> float:
    """The fourth-order invariant that is constant exactly for quasiarithmetic
    Cauchy means::

        (3 W41 + 12 W32) / W21^(5/3) - 5 W31^2 / W21^(8/3)

    Fractional powers use the real cube root, so the sign of ``W21`` is kept
    in the odd powers.
    """
    jf, jg = pair.jets(x)
    return _e_from_jets(jf, jg, x)


@dataclass(frozen=True)
class ExpressionProfile:
    points: list[tuple[float, float]]
    min: float
    max: float
    median: float
    constancy: bool
    tol_abs: float = CONSTANCY_TOL_ABS
    tol_rel: float = CONSTANCY_TOL_REL

    @property
    def spread(self) -> float:
        return self.max - self.min

    @property
    def argmin(self) -> float:
        return min(self.points, key=lambda p: (p[1], p[0]))[0]

    @property
    def argmax(self) -> float:
        return max(self.points, key=lambda p: (p[1], -p[0]))[0]


def expression_profile(pair: GeneratorPair, n_points: int = 201,
                       tol_abs: float = CONSTANCY_TOL_ABS,
                       tol_rel: float = CONSTANCY_TOL_REL) -> ExpressionProfile:
    if n_points < 33:
        raise ValueError("n_points must be at least 33")
    points = [(x, qa_expression_E(pair, x)) for x in chebyshev_grid(pair.interval, n_points)]
    values = [e for _, e in points]
    lo, hi = min(values), max(values)
    med = statistics.median(values)
    constant = (hi - lo) <= tol_abs + tol_rel * max(1.0, abs(med))
    return ExpressionProfile(points, lo, hi, med, constant, tol_abs, tol_rel)


def estimate_p(profile: ExpressionProfile) -> float:
    """Parameter ``p`` of the sine/cosine-type system, ``-median(E) / 9``."""
    if not profile.constancy:
        raise ValueError("E is not constant; p is undefined")
    return -profile.median / 9.0 + 0.0  # no negative zero


# Conic fit ----------------------------------------------------------------

@dataclass(frozen=True)
class ConicCoefficients:
    alpha: float
    beta: float
    gamma: float
    delta: float
    epsilon: float
    eta: float
    residual: float
    nondegenerate: bool
    quadratic_part_nonzero: bool
    det_q: float = 0.0
    det_quadratic_part: float = 0.0
    frame_det_q: float = 0.0

    @property
    def vector(self) -> tuple[float, ...]:
        return (self.alpha, self.beta, self.gamma, self.delta, self.epsilon, self.eta)

    def evaluate(self, f: float, g: float) -> float:
        a, b, c, d, e, h = self.vector
        return a * f * f + b * f * g + c * g * g + d * f + e * g + h

    def is_fit(self, tol: float = FIT_RESIDUAL_TOL) -> bool:
        return self.residual <= tol and self.quadratic_part_nonzero and self.nondegenerate


SQRT2 = math.sqrt(2.0)


def _whiten(fs: Sequence[float], gs: Sequence[float]):
    """Affine map ``z = M (p - mu)`` taking the sample cloud to zero mean and
    identity covariance. Returns ``(mu, M)``, or ``None`` if the samples are
    collinear."""
    m = len(fs)
    mu = (math.fsum(fs) / m, math.fsum(gs) / m)
    df = [f - mu[0] for f in fs]
    dg = [g - mu[1] for g in gs]
    cov = [[math.fsum(a * a for a in df) / m, math.fsum(a * b for a, b in zip(df, dg)) / m],
           [0.0, math.fsum(b * b for b in dg) / m]]
    cov[1][0] = cov[0][1]
    values, vectors = jacobi_eigh(cov)
    if values[0] <= 1e-26 * values[1]:
        return None
    mat = [[vectors[k][0] / math.sqrt(values[k]), vectors[k][1] / math.sqrt(values[k])]
           for k in range(2)]
    return mu, mat


def _line_fit(fs, gs) -> ConicCoefficients:
    # Collinear samples: report the line itself (degenerate, no quadratic part).
    m = len(fs)
    mu = (math.fsum(fs) / m, math.fsum(gs) / m)
    cov = [[math.fsum((f - mu[0]) ** 2 for f in fs) / m,
            math.fsum((f - mu[0]) * (g - mu[1]) for f, g in zip(fs, gs)) / m], [0.0, 0.0]]
    cov[1][0] = cov[0][1]
    cov[1][1] = math.fsum((g - mu[1]) ** 2 for g in gs) / m
    _, vectors = jacobi_eigh(cov)
    d, e = vectors[0]
    h = -(d * mu[0] + e * mu[1])
    v = [0.0, 0.0, 0.0, d, e, h]
    n = norm(v)
    v = _sign_normalize([c / n for c in v])
    resid = rms(v[3] * f + v[4] * g + v[5] for f, g in zip(fs, gs))
    return ConicCoefficients(*v, residual=resid, nondegenerate=False,
                             quadratic_part_nonzero=False)


def _sign_normalize(v: list[float]) -> list[float]:
    for vi in v:
        if abs(vi) > DEGENERACY_TOL:
            return [-c for c in v] if vi < 0 else v
    return v


def fit_conic_samples(fs: Sequence[float], gs: Sequence[float]) -> ConicCoefficients:
    """Least-squares conic through the points ``(fs[k], gs[k])``.

    The points are first whitened (zero mean, identity covariance) and the
    monomials taken as ``(u^2, sqrt2 uv, v^2, u, v, 1)`` with one common
    scale on the quadratic block, bringing every column to unit RMS on
    average. That frame is fixed up to a rotation, under which the Gram
    matrix is orthogonally similar, so ``residual`` does not depend on
    which equivalent pair ``(af + bg, cf + dg)`` supplied the samples.
    ``residual`` is the RMS of the conic equation in this frame for the
    unit eigenvector of the smallest Gram eigenvalue. The returned
    coefficients are mapped back to the original coordinates and
    normalized to unit length, first nonzero entry positive.
    """
    if len(fs) < 6:
        raise ValueError("need at least six samples")
    white = _whiten(fs, gs)
    if white is None:
        return _line_fit(fs, gs)
    mu, mt = white
    zs = [(mt[0][0] * (f - mu[0]) + mt[0][1] * (g - mu[1]),
           mt[1][0] * (f - mu[0]) + mt[1][1] * (g - mu[1])) for f, g in zip(fs, gs)]
    quad = [[u * u, SQRT2 * u * v, v * v] for u, v in zs]
    qs = math.sqrt(sum(c * c for c in column_rms(quad)) / 3.0)
    rows = [[q[0] / qs, q[1] / qs, q[2] / qs, u, v, 1.0] for q, (u, v) in zip(quad, zs)]
    _, vectors = jacobi_eigh(gram(rows))
    k = vectors[0]
    residual = rms(math.fsum(a * c for a, c in zip(r, k)) for r in rows)

    # Back to (f, g): z^T Az z + bz.z + c with z = M (p - mu).
    az = [[k[0] / qs, k[1] / (SQRT2 * qs)], [k[1] / (SQRT2 * qs), k[2] / qs]]
    bz = (k[3], k[4])
    a_p = [[math.fsum(mt[r][i] * az[r][s] * mt[s][j] for r in range(2) for s in range(2))
            for j in range(2)] for i in range(2)]
    b_p = [mt[0][i] * bz[0] + mt[1][i] * bz[1] for i in range(2)]
    a_mu = [a_p[i][0] * mu[0] + a_p[i][1] * mu[1] for i in range(2)]
    v = [
        a_p[0][0],
        2.0 * a_p[0][1],
        a_p[1][1],
        b_p[0] - 2.0 * a_mu[0],
        b_p[1] - 2.0 * a_mu[1],
        mu[0] * a_mu[0] + mu[1] * a_mu[1] - (b_p[0] * mu[0] + b_p[1] * mu[1]) + k[5],
    ]
    n = norm(v)
    v = _sign_normalize([c / n for c in v])
    a, b, c, d, e, h = v
    # Degeneracy is judged in the whitened frame: the raw determinant of a
    # unit vector shrinks like scale^-4 when the samples are rescaled.
    w = [k[0] / qs, SQRT2 * k[1] / qs, k[2] / qs, k[3], k[4], k[5]]
    wn = norm(w)
    w = [x / wn for x in w]
    return ConicCoefficients(
        a, b, c, d, e, h,
        residual=residual,
        nondegenerate=abs(_conic_det(w)) > DEGENERACY_TOL,
        quadratic_part_nonzero=(w[0] ** 2 + w[1] ** 2 + w[2] ** 2) > DEGENERACY_TOL,
        det_q=_conic_det(v),
        det_quadratic_part=a * c - b * b / 4,
        frame_det_q=_conic_det(w),
    )


def _conic_det(v: Sequence[float]) -> float:
    a, b, c, d, e, h = v
    return det3([[a, b / 2, d / 2], [b / 2, c, e / 2], [d / 2, e / 2, h]])


def fit_conic(pair: GeneratorPair, n_samples: int = 129) -> ConicCoefficients:
    if n_samples < 12:
        raise ValueError("n_samples must be at least 12")
    pts = chebyshev_grid(pair.interval, n_samples)
    vals = [pair.values(x) for x in pts]
    return fit_conic_samples([v[0] for v in vals], [v[1] for v in vals])


# Quadratic form in (f', g') ----------------------------------------------

@dataclass(frozen=True)
class QuadraticFormFit:
    a: float
    b: float
    c: float
    residual: float
    rank: int = 3

    def is_fit(self, tol: float = FIT_RESIDUAL_TOL) -> bool:
        return self.residual <= tol


def fit_quadratic_form(pair: GeneratorPair, n_samples: int = 129) -> QuadraticFormFit:
    """Fit ``a f'^2 + b f'g' + c g'^2 = |W21|^(2/3)``.

    ``residual`` is the RMS misfit divided by the RMS of the right-hand side.
    """
    if n_samples < 12:
        raise ValueError("n_samples must be at least 12")
    rows, rhs = [], []
    for x in chebyshev_grid(pair.interval, n_samples):
        jf, jg = pair.jets(x)
        f1, g1 = jf.d1, jg.d1
        rows.append([f1 * f1, f1 * g1, g1 * g1])
        rhs.append(signed_cbrt_pow(wronskian_from_jets(jf, jg, 2, 1), 2))
    b_scale = rms(rhs) or 1.0
    sol, rank = lstsq_normal(rows, [v / b_scale for v in rhs])
    sol = [s * b_scale for s in sol]
    misfit = rms(math.fsum(r[k] * sol[k] for k in range(3)) - v for r, v in zip(rows, rhs))
    return QuadraticFormFit(sol[0], sol[1], sol[2], misfit / b_scale, rank)


# Bajraktarevic-type cross-checks ------------------------------------------

@dataclass(frozen=True)
class BajraktarevicCheck:
    unit_conic_residual: float
    w_ratio_spread: float
    coefficients: tuple[float, float, float]
    ratio_median: float


def bajraktarevic_checks(F: Callable[[float], Jet], G: Callable[[float], Jet],
                         grid: Sequence[float]) -> BajraktarevicCheck:
    """Test ``alpha F^2 + beta F G + gamma G^2 = 1`` and constancy of
    ``W^{2,1}_{F,G} / (W^{1,0}_{F,G})^3`` on ``grid``.

    ``F`` and ``G`` map a point to a jet whose entries up to order 2 are valid.
    """
    rows, ratios = [], []
    for x in grid:
        jF, jG = F(x), G(x)
        if jG.d0 == 0.0:
            raise RegularityError("G vanishes", point=x, tag="g_zero")
        w10 = wronskian_from_jets(jF, jG, 1, 0)
        if w10 == 0.0:
            raise RegularityError("W^{1,0} vanishes", point=x, tag="w10_zero")
        rows.append([jF.d0 * jF.d0, jF.d0 * jG.d0, jG.d0 * jG.d0])
        ratios.append(wronskian_from_jets(jF, jG, 2, 1) / w10 ** 3)
    coef, _ = lstsq_normal(rows, [1.0] * len(rows))
    resid = rms(math.fsum(r[k] * coef[k] for k in range(3)) - 1.0 for r in rows)
    return BajraktarevicCheck(resid, max(ratios) - min(ratios), tuple(coef),
                              statistics.median(ratios))


# ODE and discriminant identities ------------------------------------------

def check_ode_lemma(pair: GeneratorPair, x: float) -> tuple[float, float]:
    """Residuals of ``W21 Y'' = W31 Y' - W32 Y`` for ``Y = f'`` and ``Y = g'``,
    each normalized by ``max(1, |W21 Y''|)``."""
    jf, jg = pair.jets(x)
    w21 = wronskian_from_jets(jf, jg, 2, 1)
    w31 = wronskian_from_jets(jf, jg, 3, 1)
    w32 = wronskian_from_jets(jf, jg, 3, 2)
    out = []
    for j in (jf, jg):
        lhs = w21 * j.d3
        r = abs(lhs - w31 * j.d2 + w32 * j.d1)
        out.append(r / max(1.0, abs(lhs)))
    return out[0], out[1]


def discriminant_check(alpha: float, beta: float, gamma: float, u: float) -> tuple[float, float]:
    """``D_P = beta^2 - 4 alpha gamma`` for ``P(u) = alpha + beta u + gamma u^2``,
    and ``|D_P - (P'(u)^2 - 2 P''(u) P(u))|``."""
    d = beta * beta - 4.0 * alpha * gamma
    p = alpha + beta * u + gamma * u * u
    p1 = beta + 2.0 * gamma * u
    p2 = 2.0 * gamma
    return d, abs(d - (p1 * p1 - 2.0 * p2 * p))
