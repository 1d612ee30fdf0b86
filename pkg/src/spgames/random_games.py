"""Random game generators for property tests and experiments.

Every sampler takes a ``numpy.random.Generator`` so draws are reproducible.
"""
from __future__ import annotations

import numpy as np

from .functions import Constant, Linear, Log, PiecewiseLinear, Power, Quadratic
from .game import GameSpec, make_game


def _concave_benefit(rng, top: float, smooth: bool = True):
    kinds = ["linear", "log", "power", "quadratic"] + ([] if smooth else ["piecewise"])
    kind = kinds[rng.integers(len(kinds))]
    if kind == "linear":
        return Linear(rng.uniform(0.2, 2.0), rng.uniform(-1.0, 1.0))
    if kind == "log":
        return Log(rng.uniform(0.5, 3.0), rng.uniform(0.2, 2.0))
    if kind == "power":
        return Power(rng.uniform(0.5, 3.0), rng.uniform(0.3, 0.9), rng.uniform(0.2, 2.0))
    if kind == "quadratic":
        a = -rng.uniform(0.01, 0.5)
        # slope stays nonnegative up to the largest aggregate
        return Quadratic(a, -2 * a * top + rng.uniform(0.0, 1.0), rng.uniform(-1.0, 1.0))
    # concave nondecreasing: slopes drawn then sorted downward, last may be 0
    m = int(rng.integers(2, 5))
    knots = np.sort(rng.uniform(0.0, top, m - 1))
    ts = np.r_[0.0, knots, top]
    slopes = np.sort(rng.uniform(0.0, 2.0, m))[::-1]
    slopes[-1] *= rng.integers(0, 2)
    vals = np.r_[0.0, np.cumsum(slopes * np.diff(ts))]
    return PiecewiseLinear(tuple(zip(ts.tolist(), vals.tolist())))


def _strict_cost(rng, nonneg: bool):
    if rng.random() < 0.6:
        c = rng.uniform(0.0, 0.5) if nonneg else rng.uniform(-0.5, 0.5)
        return Quadratic(rng.uniform(0.2, 2.0), rng.uniform(0.0, 1.0), c)
    return Power(rng.uniform(0.3, 2.0), rng.uniform(1.2, 3.0), 0.0)


def _convex_cost(rng, nonneg: bool):
    u = rng.random()
    if u < 0.2:
        return Linear(rng.uniform(0.0, 1.5), rng.uniform(0.0, 0.5) if nonneg else rng.uniform(-0.5, 0.5))
    if u < 0.3:
        return Constant(rng.uniform(0.0, 0.5))
    return _strict_cost(rng, nonneg)


def _weights(rng, n):
    return np.sort(rng.uniform(0.2, 3.0, n))


def random_strict_game(rng, n: int | None = None, nonneg_costs: bool = False) -> GameSpec:
    """Smooth concave nondecreasing H, strictly convex increasing costs."""
    n = int(rng.integers(2, 6)) if n is None else n
    qbar = float(rng.uniform(0.5, 3.0))
    H = _concave_benefit(rng, n * qbar)
    g = [_strict_cost(rng, nonneg_costs) for _ in range(n)]
    return make_game(_weights(rng, n), H, g, qbar)


def random_regular_game(rng, n: int | None = None, nonneg_costs: bool = False) -> GameSpec:
    """Like ``random_strict_game`` but H may have kinks and costs may be linear or flat."""
    n = int(rng.integers(2, 6)) if n is None else n
    qbar = float(rng.uniform(0.5, 3.0))
    H = _concave_benefit(rng, n * qbar, smooth=False)
    g = [_convex_cost(rng, nonneg_costs) for _ in range(n)]
    return make_game(_weights(rng, n), H, g, qbar)


def random_quadratic_alpha(rng, n: int | None = None, low: float = 0.1, high: float = 5.0) -> np.ndarray:
    n = int(rng.integers(2, 9)) if n is None else n
    return np.sort(rng.uniform(low, high, n))


def random_profile(rng, game: GameSpec, size=None) -> np.ndarray:
    shape = (game.n,) if size is None else (size, game.n)
    return rng.uniform(0.0, game.qbar, shape)
