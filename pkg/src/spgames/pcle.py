"""Partial cooperative leadership equilibrium (PCLE) for every cooperation level.

At level k the k players with the largest alpha form the coalition C_k and
move first as one leader; the remaining players N_k answer with their Nash
equilibrium of the conditional game. Strict games make that follower
equilibrium unique, so the leader's pessimistic selection is vacuous.

The leader's k-dimensional problem collapses to one dimension: payoffs see
the cooperators only through their total X_C and their own costs, so for a
given X_C the best split minimises sum_{i in C_k} g_i(x_i), which is a
water-filling problem in the common marginal cost.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import game as gm
from .numerics import bisect_increasing, root_increasing, scan_golden_max
from .solvers import solve_ne_fixed_point


class NotStrictError(ValueError):
    pass


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class CooperationStructure:
    """Level k with cooperators C_k = {n-k+1..n} (0-based: n-k..n-1)."""

    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"level k must be in 1..{self.n}, got {self.k}")

    @property
    def cooperators(self) -> np.ndarray:
        return np.arange(self.n - self.k, self.n)

    @property
    def non_cooperators(self) -> np.ndarray:
        return np.arange(0, self.n - self.k)

    @property
    def q(self) -> int:
        """Marginal cooperator (0-based)."""
        return self.n - self.k

    @property
    def r(self) -> int | None:
        """Marginal non-cooperator (0-based), None when everyone cooperates."""
        return None if self.k == self.n else self.n - self.k - 1


@dataclass
class PcleResult:
    k: int
    profile: np.ndarray
    leader_aggregate: float
    follower_aggregate: float
    payoffs: np.ndarray
    leader_value: float
    converged: bool
    iterations: int = 0

    @property
    def aggregate(self) -> float:
        return float(self.profile.sum())

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "profile": self.profile.tolist(),
            "leader_aggregate": self.leader_aggregate,
            "follower_aggregate": self.follower_aggregate,
            "aggregate": self.aggregate,
            "payoffs": self.payoffs.tolist(),
            "leader_value": self.leader_value,
            "converged": self.converged,
            "iterations": self.iterations,
        }


def _require_strict(game):
    cls = gm.classify(game)
    if not cls.is_strict:
        raise NotStrictError("PCLE needs a strict game: " + "; ".join(cls.reasons))


def _as_coop(game, coop):
    if isinstance(coop, CooperationStructure):
        return coop
    return CooperationStructure(game.n, int(coop))


# -- followers --------------------------------------------------------------

def _follower_replies(game, followers, s):
    dH = game.H.deriv(s)
    return np.array(
        [np.asarray(game.g[j].inverse_deriv(game.alpha[j] * dH, 0.0, game.qbar)) for j in followers]
    )


def follower_block(game, coop, leader_totals):
    """Vectorised follower equilibrium for an array of leader totals.

    Returns ``(x, Y)`` with x of shape (n-k, m) and Y the follower aggregate.
    """
    L = np.atleast_1d(np.asarray(leader_totals, dtype=float))
    F = coop.non_cooperators
    if len(F) == 0:
        return np.zeros((0, L.size)), np.zeros(L.size)
    top = game.n * game.qbar
    H = game.H
    if H.has_constant_deriv(0.0, top):
        x = _follower_replies(game, F, np.zeros_like(L))
        return x, x.sum(axis=0)

    def phi(Y):
        s = np.minimum(L + Y, top)
        return Y - _follower_replies(game, F, s).sum(axis=0)

    upper = len(F) * game.qbar
    if L.size == 1:
        Y = np.array([root_increasing(lambda y: float(phi(np.array([y]))[0]), 0.0, upper)])
    else:
        a, b, _ = bisect_increasing(phi, np.zeros_like(L), np.full_like(L, upper))
        Y = 0.5 * (a + b)
    x = _follower_replies(game, F, np.minimum(L + Y, top))
    return x, x.sum(axis=0)


def follower_response(game, coop, leader_total: float, tol: float = 1e-10) -> np.ndarray:
    """Unique Nash reply of N_k to a cooperator total; empty when k = n."""
    _require_strict(game)
    coop = _as_coop(game, coop)
    if not -tol <= leader_total <= coop.k * game.qbar + tol:
        raise InfeasibleError(f"leader total {leader_total} outside [0, {coop.k * game.qbar}]")
    x, _ = follower_block(game, coop, [leader_total])
    return x[:, 0]


# -- cooperators' split -----------------------------------------------------

def split_block(game, coop, totals):
    """Cost-minimising split of each total among C_k.

    Returns ``(x, lam)``: x of shape (k, m) and the common marginal cost.
    """
    X = np.atleast_1d(np.asarray(totals, dtype=float))
    C = coop.cooperators
    costs = [game.g[i] for i in C]
    if all(c == costs[0] for c in costs):
        share = X / len(C)
        x = np.tile(share, (len(C), 1))
        return x, np.asarray(costs[0].deriv(share))

    def total(lam):
        return np.array([np.asarray(c.inverse_deriv(lam, 0.0, game.qbar)) for c in costs]).sum(axis=0)

    lam_lo = min(float(c.deriv(0.0)) for c in costs) - 1.0
    lam_hi = max(float(c.deriv(game.qbar)) for c in costs) + 1.0
    if X.size == 1:
        lam = root_increasing(lambda v: float(total(v)) - X[0], lam_lo, lam_hi)
        a = b = np.array([lam])
    else:
        a, b, _ = bisect_increasing(lambda lam: total(lam) - X, np.full_like(X, lam_lo), np.full_like(X, lam_hi))
    x_small = np.array([np.asarray(c.inverse_deriv(a, 0.0, game.qbar)) for c in costs])
    x_big = np.array([np.asarray(c.inverse_deriv(b, 0.0, game.qbar)) for c in costs])
    gap = x_big.sum(axis=0) - x_small.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = np.where(gap > 0, np.clip((X - x_small.sum(axis=0)) / gap, 0.0, 1.0), 0.0)
    return x_small + theta * (x_big - x_small), 0.5 * (a + b)


def leader_split(game, coop, X_C: float) -> np.ndarray:
    coop = _as_coop(game, coop)
    if not 0.0 <= X_C <= coop.k * game.qbar * (1 + 1e-12):
        raise InfeasibleError(f"X_C = {X_C} outside [0, {coop.k * game.qbar}]")
    for i in coop.cooperators:
        if not game.g[i].is_strictly_convex(0.0, game.qbar):
            raise NotStrictError(f"g_{i + 1} is not strictly convex")
    x, _ = split_block(game, coop, [min(X_C, coop.k * game.qbar)])
    return x[:, 0]


# -- leader's problem -------------------------------------------------------

def _objective_block(game, coop, totals):
    X = np.atleast_1d(np.asarray(totals, dtype=float))
    xc, _ = split_block(game, coop, X)
    _, Y = follower_block(game, coop, X)
    A_C = float(game.weights[coop.cooperators].sum())
    s = np.minimum(X + Y, game.n * game.qbar)
    costs = sum(np.asarray(game.g[i].value(xc[j])) for j, i in enumerate(coop.cooperators))
    return A_C * np.asarray(game.H.value(s)) - costs


def leader_objective(game, coop, X_C: float) -> float:
    """Coalition payoff A_C H(X_C + Y(X_C)) - sum g_i(split_i) at a total X_C."""
    coop = _as_coop(game, coop)
    if not 0.0 <= X_C <= coop.k * game.qbar * (1 + 1e-12):
        raise InfeasibleError(f"X_C = {X_C} outside [0, {coop.k * game.qbar}]")
    return float(_objective_block(game, coop, [X_C])[0])


def leader_gradient(game, coop, X_C: float) -> float:
    """d/dX_C of the leader objective, using the followers' implicit response.

    Interior followers move by dx_j/ds = alpha_j H''(s) / g_j''(x_j), so the
    total reacts as 1 / (1 - D) with D the sum of those slopes; the split's
    marginal cost is the multiplier of the water-filling problem.
    """
    coop = _as_coop(game, coop)
    _, lam = split_block(game, coop, [X_C])
    xf, Y = follower_block(game, coop, [X_C])
    s = min(X_C + float(Y[0]), game.n * game.qbar)
    d2H = float(game.H.deriv2(s))
    D = 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        for j, idx in enumerate(coop.non_cooperators):
            xj = float(xf[j, 0])
            if 0.0 < xj < game.qbar:
                D += game.alpha[idx] * d2H / float(game.g[idx].deriv2(xj))
    A_C = float(game.weights[coop.cooperators].sum())
    if not np.isfinite(D):
        return -float(lam[0])
    return A_C * float(game.H.deriv(s)) / (1.0 - D) - float(lam[0])


def _assemble(game, coop, X_C, converged, iterations):
    x = np.zeros(game.n)
    x[coop.cooperators] = split_block(game, coop, [X_C])[0][:, 0]
    xf, Y = follower_block(game, coop, [X_C])
    x[coop.non_cooperators] = xf[:, 0]
    pay = gm.payoffs(game, x)
    return PcleResult(
        k=coop.k,
        profile=x,
        leader_aggregate=float(x[coop.cooperators].sum()),
        follower_aggregate=float(Y[0]),
        payoffs=pay,
        leader_value=float(pay[coop.cooperators].sum()),
        converged=converged,
        iterations=iterations,
    )


def solve_pcle(game, k: int, tol: float = 1e-10, scan_points: int = 1024) -> PcleResult:
    """PCLE at level k.

    k = 1 is the Nash equilibrium by convention; k = n (grand coalition)
    runs the leader search with no followers and lands on the social optimum.
    """
    _require_strict(game)
    coop = _as_coop(game, k)
    if coop.k == 1:
        ne = solve_ne_fixed_point(game, tol=tol)
        pay = ne.payoffs
        return PcleResult(
            k=1,
            profile=ne.profile,
            leader_aggregate=float(ne.profile[-1]),
            follower_aggregate=float(ne.profile[:-1].sum()),
            payoffs=pay,
            leader_value=float(pay[-1]),
            converged=ne.converged,
            iterations=ne.iterations,
        )
    upper = coop.k * game.qbar
    best = scan_golden_max(
        lambda t: float(_objective_block(game, coop, [t])[0]),
        0.0,
        upper,
        points=scan_points,
        tol=tol,
        f_vec=lambda ts: _objective_block(game, coop, ts),
        grad=lambda t: leader_gradient(game, coop, t),
    )
    return _assemble(game, coop, best["x"], best["width"] <= tol, best["iterations"])


def solve_all_levels(game, tol: float = 1e-10) -> dict[int, PcleResult]:
    return {k: solve_pcle(game, k, tol=tol) for k in range(1, game.n + 1)}
