from __future__ import annotations

from typing import Callable

from . import scalar as sc
from .scalar import DEFAULT_CONTEXT, Scalar, ToleranceContext

DEFAULT_GRID = 2 ** 14


def find_first_zero(g: Callable[[Scalar], Scalar], lo, hi, grid_points: int = DEFAULT_GRID,
                    tol=None, ctx: ToleranceContext = DEFAULT_CONTEXT):
    """Smallest zero of ``g`` on ``[lo, hi]``, or None.

    Scans a uniform grid for the first point where ``|g| <= tol`` or the sign
    flips, then bisects the bracketing cell down to width ``tol``.  A zero at
    ``lo`` itself is reported as ``lo``.  Zeros that touch without changing
    sign between grid points are only found if a grid point lands within
    ``tol`` of them.
    """
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    tol = ctx.equality_tolerance if tol is None else tol
    with ctx.working():
        lo, hi = sc.approx(lo), sc.approx(hi)
        if not lo < hi:
            raise ValueError("need lo < hi")
        g_lo = g(lo)
        if abs(g_lo) <= tol:
            return lo
        step = (hi - lo) / (grid_points - 1)
        a, g_a = lo, g_lo
        for k in range(1, grid_points):
            b = hi if k == grid_points - 1 else lo + k * step
            g_b = g(b)
            if abs(g_b) <= tol:
                return b
            if (g_a < 0) != (g_b < 0):
                return _bisect(g, a, b, g_a, tol)
            a, g_a = b, g_b
    return None


def _bisect(g, a, b, g_a, tol):
    while b - a > tol:
        m = (a + b) / 2
        if m == a or m == b:
            break
        g_m = g(m)
        if g_m == 0:
            return m
        if (g_a < 0) == (g_m < 0):
            a, g_a = m, g_m
        else:
            b = m
    return (a + b) / 2
