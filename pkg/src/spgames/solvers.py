"""Nash equilibrium, social optimum and potential maximisation.

The equilibrium solvers use the aggregate fixed-point construction: for a
candidate aggregate s each player's reply is x_i(s) = (g_i')^{-1}(w_i H'(s))
clamped to [0, qbar], and s* solves s = sum_i x_i(s). With w_i = alpha_i this
gives the Nash equilibrium (and the potential maximiser); with w_i = A it
gives the social optimum. The lattice oracles are brute force and share no
code with the fixed-point path beyond payoff evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import game as gm
from .numerics import bisect_increasing

NASH = "NashEquilibrium"
SOCIAL_OPTIMUM = "SocialOptimum"
POTENTIAL_MAX = "PotentialMax"


class NotRegularError(ValueError):
    pass


class NoBracketError(RuntimeError):
    pass


class TooLargeError(ValueError):
    pass


@dataclass
class EquilibriumResult:
    kind: str
    profile: np.ndarray
    aggregate: float
    payoffs: np.ndarray
    foc_residuals: np.ndarray
    converged: bool
    iterations: int
    multiplier: float = float("nan")
    certified_unique: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "profile": self.profile.tolist(),
            "aggregate": self.aggregate,
            "payoffs": self.payoffs.tolist(),
            "foc_residuals": self.foc_residuals.tolist(),
            "converged": self.converged,
            "iterations": self.iterations,
            "certified_unique": self.certified_unique,
            "notes": list(self.notes),
        }


def replies(game: gm.GameSpec, weights, mu) -> np.ndarray:
    """x_i = clamp((g_i')^{-1}(w_i * mu), 0, qbar); shape (n,) + shape(mu)."""
    mu = np.asarray(mu, dtype=float)
    with np.errstate(invalid="ignore", over="ignore"):
        return np.array(
            [np.asarray(game.g[i].inverse_deriv(weights[i] * mu, 0.0, game.qbar)) for i in range(game.n)]
        )


def fixed_point_map(game: gm.GameSpec, s, weights=None):
    """F(s) = sum_i x_i(s); nonincreasing in s for regular games."""
    w = game.weights if weights is None else np.asarray(weights, dtype=float)
    return replies(game, w, game.H.deriv(np.asarray(s, dtype=float))).sum(axis=0)


def _select(game, weights, mu_a, mu_b, s):
    """Profile with aggregate ``s`` from multipliers in [mu_b, mu_a].

    A kink in H makes H' jump across s; a flat g_i' makes x_i jump. The first
    is resolved by bisecting on the multiplier, the second by moving the
    indifferent players along the segment between their two replies.
    """
    if mu_a > mu_b:
        lo, hi, _ = bisect_increasing(lambda m: replies(game, weights, m).sum(axis=0) - s, mu_b, mu_a)
        mu_lo, mu_hi = float(lo), float(hi)
    else:
        mu_lo = mu_hi = float(mu_a)
    x_small = replies(game, weights, mu_lo)
    x_big = replies(game, weights, mu_hi)
    gap = x_big.sum() - x_small.sum()
    theta = 1.0 if gap <= 0 else float(np.clip((s - x_small.sum()) / gap, 0.0, 1.0))
    return x_small + theta * (x_big - x_small), 0.5 * (mu_lo + mu_hi)


def _kkt_residuals(game, weights, x, mu):
    r = np.array([weights[i] * mu - game.g[i].deriv(x[i]) for i in range(game.n)])
    r = np.where(x <= 0.0, np.maximum(r, 0.0), r)
    return np.where(x >= game.qbar, np.minimum(r, 0.0), r)


def _solve(game, weights, kind, tol, max_iter, foc_tol):
    cls = gm.classify(game)
    if not cls.is_regular:
        raise NotRegularError(
            "fixed-point solver needs a regular game ("
            + "; ".join(cls.reasons)
            + "); use the grid oracle instead"
        )
    H = game.H
    top = game.n * game.qbar
    w = np.asarray(weights, dtype=float)
    notes = []
    iterations = 0
    bracket_ok = True
    if H.has_constant_deriv(0.0, top):
        # replies do not depend on s
        mu = float(H.deriv(0.0))
        x = replies(game, w, mu)
        notes.append("constant H': closed-form replies")
    else:
        def phi(s):
            return s - fixed_point_map(game, s, w)

        if np.isnan(phi(0.0)) or np.isnan(phi(top)):
            raise NoBracketError("fixed-point map is undefined at the bracket ends")
        if phi(0.0) >= 0:
            x, mu = replies(game, w, H.deriv(0.0)), float(H.deriv(0.0))
            notes.append("fixed point at s = 0")
        elif phi(top) <= 0:
            x, mu = replies(game, w, H.deriv(top)), float(H.deriv(top))
            notes.append(f"fixed point at s = {top}")
        else:
            a, b, iterations = bisect_increasing(phi, 0.0, top, tol=tol, max_iter=max_iter)
            a, b = float(a), float(b)
            bracket_ok = b - a <= tol or iterations < max_iter
            x, mu = _select(game, w, float(H.deriv(a)), float(H.deriv(b)), 0.5 * (a + b))
    s = float(x.sum())
    delta = 10 * tol
    mu = float(np.clip(mu, H.deriv(min(s + delta, top)), H.deriv(max(s - delta, 0.0))))
    resid = _kkt_residuals(game, w, x, mu)
    scale = max(1.0, float(np.max(np.abs(w * mu))))
    converged = bracket_ok and float(np.max(np.abs(resid))) <= foc_tol * scale
    unique = cls.is_strict
    if kind != SOCIAL_OPTIMUM:
        unique = unique and float(H.deriv(0.0)) > 0
    if not unique:
        notes.append("existence only")
    return EquilibriumResult(
        kind=kind,
        profile=x,
        aggregate=s,
        payoffs=gm.payoffs(game, x),
        foc_residuals=resid,
        converged=converged,
        iterations=int(iterations),
        multiplier=mu,
        certified_unique=bool(unique),
        notes=notes,
    )


def solve_ne_fixed_point(game, tol=1e-10, max_iter=200, foc_tol=1e-8) -> EquilibriumResult:
    """Nash equilibrium of a regular game via the aggregate fixed point."""
    return _solve(game, game.weights, NASH, tol, max_iter, foc_tol)


def solve_so(game, tol=1e-10, max_iter=200, foc_tol=1e-8) -> EquilibriumResult:
    """Social optimum: the same construction with every weight replaced by A."""
    w = np.full(game.n, game.total_weight)
    return _solve(game, w, SOCIAL_OPTIMUM, tol, max_iter, foc_tol)


def maximize_potential(game, tol=1e-10, max_iter=200, foc_tol=1e-8) -> EquilibriumResult:
    """Maximiser of the weighted potential.

    The potential's first-order conditions H'(s) = g_i'(x_i) / alpha_i are
    the Nash conditions, and P is concave for regular games, so this runs the
    same construction; it exists separately so the two can be compared
    against the lattice oracles.
    """
    return _solve(game, game.weights, POTENTIAL_MAX, tol, max_iter, foc_tol)


# -- lattice oracles --------------------------------------------------------

MAX_LATTICE = 30_000_000


def _lattice(n, grid):
    if n > 3:
        raise TooLargeError(f"grid oracle supports n <= 3, got n = {n}")
    if len(grid) ** n * n > MAX_LATTICE:
        raise TooLargeError(f"{len(grid)}^{n} lattice is too large")
    mesh = np.meshgrid(*([grid] * n), indexing="ij")
    return np.stack(mesh, axis=-1)


def lattice_nash_set(payoff_fn, n, grid, eps=1e-9) -> np.ndarray:
    """All eps-Nash profiles of the lattice ``grid``^n, sorted lexicographically.

    ``payoff_fn`` maps an array of profiles (..., n) to payoffs (..., n).
    A profile qualifies when no player gains more than ``eps`` by moving to
    any other lattice point.
    """
    grid = np.asarray(grid, dtype=float)
    X = _lattice(n, grid)
    U = np.asarray(payoff_fn(X))
    ok = np.ones(U.shape[:-1], dtype=bool)
    for i in range(n):
        best = U[..., i].max(axis=i, keepdims=True)
        ok &= U[..., i] >= best - eps
    return X[ok].reshape(-1, n)


def lattice_argmax(objective_fn, n, grid, tie_tol=1e-12):
    """Lexicographically smallest lattice maximiser of ``objective_fn``."""
    grid = np.asarray(grid, dtype=float)
    X = _lattice(n, grid)
    vals = np.asarray(objective_fn(X)).ravel()
    best = vals.max()
    idx = int(np.flatnonzero(vals >= best - tie_tol * (1.0 + abs(best)))[0])
    return X.reshape(-1, n)[idx], float(vals[idx])


def grid_axis(game, points_per_axis):
    if points_per_axis < 11:
        raise ValueError("points_per_axis must be at least 11")
    return np.linspace(0.0, game.qbar, points_per_axis)


def grid_oracle_ne(game, points_per_axis=101, eps=1e-9) -> np.ndarray:
    """Brute-force eps-Nash set on a lattice (rows are profiles)."""
    return lattice_nash_set(lambda X: gm.payoffs(game, X), game.n, grid_axis(game, points_per_axis), eps)


def grid_oracle_argmax(objective, game, points_per_axis=101) -> np.ndarray:
    """Lattice argmax of ``"potential"`` or ``"welfare"``; ties go to the smallest profile."""
    fns = {"potential": gm.potential, "welfare": gm.welfare}
    if objective not in fns:
        raise ValueError(f"objective must be one of {sorted(fns)}, got {objective!r}")
    fn = fns[objective]
    x, _ = lattice_argmax(lambda X: fn(game, X), game.n, grid_axis(game, points_per_axis))
    return x
