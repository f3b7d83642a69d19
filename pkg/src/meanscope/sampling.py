"""Probe grids and reproducible random sampling over a margin-shrunk interval."""

from __future__ import annotations

import math
import os
import random

from .expr import Interval

DEFAULT_SEED = 42
SEED_ENV = "MEANSCOPE_SEED"


def default_seed() -> int:
    value = os.environ.get(SEED_ENV)
    return int(value) if value not in (None, "") else DEFAULT_SEED


def chebyshev_grid(interval: Interval, n: int) -> list[float]:
    """``n`` Chebyshev-Lobatto points on the shrunk interval, increasing,
    endpoints included."""
    if n < 2:
        raise ValueError("need at least two grid points")
    a, b = interval.shrunk()
    c, r = 0.5 * (a + b), 0.5 * (b - a)
    pts = [c - r * math.cos(math.pi * k / (n - 1)) for k in range(n)]
    pts[0], pts[-1] = a, b
    return pts


def uniform_grid(interval: Interval, n: int) -> list[float]:
    a, b = interval.shrunk()
    step = (b - a) / (n - 1)
    pts = [a + k * step for k in range(n)]
    pts[-1] = b
    return pts


def make_rng(seed: int | None = None) -> random.Random:
    return random.Random(default_seed() if seed is None else seed)


def random_points(interval: Interval, count: int, rng: random.Random) -> list[float]:
    a, b = interval.shrunk()
    return [rng.uniform(a, b) for _ in range(count)]
