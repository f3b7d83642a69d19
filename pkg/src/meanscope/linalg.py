"""Dense linear algebra for the tiny systems used by the fits (at most 6x6).

Matrices are lists of row lists. Everything here is deliberately small and
dependency-free so that convergence criteria are fully under test control.
"""

from __future__ import annotations

import math


def identity(n: int) -> list[list[float]]:
    return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]


def off_diagonal_norm(a: list[list[float]]) -> float:
    n = len(a)
    return math.sqrt(sum(a[i][j] ** 2 for i in range(n) for j in range(n) if i != j))


def jacobi_eigh(a: list[list[float]], tol: float = 1e-14, max_sweeps: int = 100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below ``tol`` (or a
    sweep makes no progress). Returns ``(eigenvalues, vectors)`` sorted by
    ascending eigenvalue, with ``vectors[k]`` the k-th unit eigenvector.
    """
    n = len(a)
    a = [list(map(float, row)) for row in a]
    v = identity(n)
    prev = math.inf
    for _ in range(max_sweeps):
        off = off_diagonal_norm(a)
        if off < tol or off >= prev:
            break
        prev = off
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
                a[p][q] = a[q][p] = 0.0
                for k in range(n):
                    vkp, vkq = v[k][p], v[k][q]
                    v[k][p] = c * vkp - s * vkq
                    v[k][q] = s * vkp + c * vkq
    order = sorted(range(n), key=lambda i: a[i][i])
    values = [a[i][i] for i in order]
    vectors = [[v[k][i] for k in range(n)] for i in order]
    return values, vectors


def column_rms(rows: list[list[float]]) -> list[float]:
    m = len(rows)
    ncol = len(rows[0])
    return [math.sqrt(math.fsum(r[j] * r[j] for r in rows) / m) for j in range(ncol)]


def gram(rows: list[list[float]]) -> list[list[float]]:
    """``A^T A / m``, summed in a fixed row order."""
    m = len(rows)
    ncol = len(rows[0])
    g = [[0.0] * ncol for _ in range(ncol)]
    for i in range(ncol):
        for j in range(i, ncol):
            g[i][j] = g[j][i] = math.fsum(r[i] * r[j] for r in rows) / m
    return g


def dot(u, v) -> float:
    return math.fsum(a * b for a, b in zip(u, v))


def norm(u) -> float:
    return math.sqrt(dot(u, u))


def rms(values) -> float:
    values = list(values)
    return math.sqrt(math.fsum(v * v for v in values) / len(values))


def det3(m) -> float:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def lstsq_normal(rows: list[list[float]], rhs: list[float], rcond: float = 1e-13):
    """Least squares via normal equations on column-equilibrated data.

    The normal matrix is diagonalized with :func:`jacobi_eigh` and inverted
    on the eigenvalues above ``rcond * max``, so a rank-deficient system
    yields the minimum-norm solution. Returns ``(solution, rank)``.
    """
    scale = column_rms(rows)
    scale = [s if s > 0.0 else 1.0 for s in scale]
    scaled = [[r[j] / scale[j] for j in range(len(scale))] for r in rows]
    m = len(rows)
    n_mat = gram(scaled)
    atb = [math.fsum(r[j] * b for r, b in zip(scaled, rhs)) / m for j in range(len(scale))]
    values, vectors = jacobi_eigh(n_mat)
    top = max(abs(v) for v in values)
    y = [0.0] * len(scale)
    rank = 0
    for lam, vec in zip(values, vectors):
        if lam > rcond * top:
            rank += 1
            coef = dot(vec, atb) / lam
            y = [yi + coef * vi for yi, vi in zip(y, vec)]
    return [yi / s for yi, s in zip(y, scale)], rank
