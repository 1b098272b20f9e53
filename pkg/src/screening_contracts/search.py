"""Grid scan followed by golden-section refinement for one-dimensional maximization."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, width: float = 1e-7):
    """Maximize ``f`` on [lo, hi], assuming unimodality, until the bracket is narrower than ``width``."""
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > width:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def grid_then_golden(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    n_grid: int,
    width: float = 1e-7,
    include_lo: bool = True,
) -> tuple[float, float]:
    """Uniform scan of ``n_grid`` points, then golden refinement between the neighbours of the best one.

    Returns the best point seen, so the result never falls below the grid maximum.
    Ties on the grid go to the larger argument.
    """
    if n_grid < 2:
        raise ValueError("grid needs at least two points")
    xs = np.linspace(lo, hi, n_grid)
    if not include_lo:
        xs = xs[1:]
    values = np.array([f(float(x)) for x in xs])
    top = values.max()
    i = int(np.flatnonzero(values >= top)[-1])
    best_x, best_f = float(xs[i]), float(top)
    left = float(xs[i - 1]) if i > 0 else lo
    right = float(xs[i + 1]) if i + 1 < xs.size else hi
    if right - left > width:
        x, fx = golden_section_max(f, left, right, width)
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x, best_f
