"""Bracketing root finders and line searches shared by the solvers."""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2


def bisect_increasing(phi, lo, hi, tol=0.0, max_iter=200):
    """Vectorised bisection for a nondecreasing ``phi`` with phi(lo) <= 0 < phi(hi).

    Returns ``(a, b, iterations)`` with phi(a) <= 0 < phi(b) and b - a <= tol
    (or at floating point resolution when ``tol`` is 0). ``lo``/``hi`` may be
    arrays; every entry is bracketed independently.
    """
    a = np.array(lo, dtype=float, copy=True)
    b = np.array(hi, dtype=float, copy=True)
    a, b = np.broadcast_arrays(a, b)
    a, b = a.copy(), b.copy()
    it = 0
    for it in range(1, max_iter + 1):
        mid = 0.5 * (a + b)
        stuck = (mid <= a) | (mid >= b)
        if np.all((b - a <= tol) | stuck):
            it -= 1
            break
        left = phi(mid) <= 0
        a = np.where(left, mid, a)
        b = np.where(left, b, mid)
    return a, b, it


def root_increasing(phi, lo, hi, xtol=1e-14):
    """Scalar root of a nondecreasing ``phi`` on [lo, hi], clamped to the ends.

    Returns lo when phi(lo) >= 0 and hi when phi(hi) <= 0.
    """
    f_lo = phi(lo)
    if f_lo >= 0:
        return float(lo)
    f_hi = phi(hi)
    if f_hi <= 0:
        return float(hi)
    return float(brentq(phi, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200))


def golden_section_max(f, a, b, tol=1e-10, max_iter=500):
    """Golden-section search for a maximum of ``f`` on [a, b].

    Returns ``(x, fx, iterations, width)``; ``x`` is the best point evaluated.
    """
    a, b = float(min(a, b)), float(max(a, b))
    c = a + INV_PHI2 * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best_x, best_f = (c, fc) if fc >= fd else (d, fd)
    it = 0
    while b - a > tol and it < max_iter:
        it += 1
        if fc >= fd:
            b, d, fd = d, c, fc
            c = a + INV_PHI2 * (b - a)
            fc = f(c)
            cand = (c, fc)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            cand = (d, fd)
        if cand[1] > best_f:
            best_x, best_f = cand
    return best_x, best_f, it, b - a


def scan_golden_max(f, lo, hi, points=1024, tol=1e-10, f_vec=None, grad=None):
    """Maximise a scalar function on [lo, hi]: lattice scan, then golden section.

    ``f_vec`` (optional) evaluates ``f`` on an array of points at once. When
    ``grad`` is given and changes sign across the bracket around the best
    scan point, the sign change is located with Brent's method instead of
    golden section (the objective is too flat near its peak for function
    values alone to pin the maximiser much below sqrt(machine eps)).
    Returns a dict with ``x``, ``value``, ``iterations``, ``width``.
    """
    grid = np.linspace(lo, hi, points)
    vals = np.asarray(f_vec(grid) if f_vec is not None else [f(t) for t in grid])
    i = int(np.argmax(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, points - 1)]
    best_x, best_f = float(grid[i]), float(vals[i])
    if grad is not None and b > a and grad(a) > 0 > grad(b):
        calls = [0]

        def slope(t):
            calls[0] += 1
            return -grad(t)

        xp = root_increasing(slope, a, b, xtol=min(tol, 1e-14))
        fp = f(xp)
        if fp >= best_f - 1e-13 * (1.0 + abs(best_f)):
            return {"x": float(xp), "value": float(fp), "iterations": calls[0], "width": min(tol, 1e-14)}
    x, fx, it, width = golden_section_max(f, a, b, tol=tol)
    if best_f > fx:
        x, fx = best_x, best_f
    return {"x": float(x), "value": float(fx), "iterations": it, "width": float(width)}
