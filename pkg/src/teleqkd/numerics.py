"""Scalar minimization and root bracketing used by the key-rate searches."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10) -> float:
    """Minimizer of a unimodal f on [a, b] to within `tol`."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def grid_then_golden(
    f_batch: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    points: int = 10_000,
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Global minimum of f on [lo, hi] via a dense grid plus golden refinement.

    `f_batch` maps an array of abscissae to an array of values. The grid
    includes both endpoints so boundary optima are not lost. Returns
    ``(argmin, min)``.
    """
    if hi < lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if hi - lo <= tol:
        x = np.array([0.5 * (lo + hi)])
        return float(x[0]), float(f_batch(x)[0])
    xs = np.linspace(lo, hi, points)
    ys = f_batch(xs)
    k = int(np.argmin(ys))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, points - 1)]
    x = golden_section(lambda t: float(f_batch(np.array([t]))[0]), a, b, tol)
    fx = float(f_batch(np.array([x]))[0])
    if ys[k] < fx:
        return float(xs[k]), float(ys[k])
    return x, fx


def bisect_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-6) -> float | None:
    """Root of f on [lo, hi] by bisection, or None without a sign change."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
