"""Named games: the tragedy of the commons and the worked examples.

The tragedy of the commons (payoff x_i * (1 - X_N) on [0, 1]^n) is handled
through exact rational closed forms, plus an independent numeric route that
solves the leader/follower problem on the original payoffs.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .functions import Constant, Linear, Log, PiecewiseLinear, Power, Quadratic
from .game import GameSpec, make_game
from .numerics import root_increasing, scan_golden_max


class UnknownModelError(KeyError):
    pass


# -- tragedy of the commons -------------------------------------------------

@dataclass(frozen=True)
class TragedyParams:
    n: int
    m: int | None = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise ValueError(f"tragedy needs n >= 3 users, got {self.n!r}")
        if self.m is not None and not 1 <= self.m <= self.n:
            raise ValueError(f"coalition size m must be in 1..{self.n}, got {self.m!r}")


@dataclass(frozen=True)
class TragedyOutcome:
    """Symmetric outcome: per-user extraction, total extraction, payoffs."""

    x: Fraction
    X_N: Fraction
    payoff: Fraction
    total_payoff: Fraction


@dataclass(frozen=True)
class TragedyPcle:
    m: int
    x_C: Fraction
    x_NC: Fraction
    X_C: Fraction
    X_NC: Fraction
    X_N: Fraction
    pi_C: Fraction
    pi_NC: Fraction


def tragedy_payoffs(x):
    """Original tragedy payoffs x_i (1 - X_N); works on (..., n) arrays."""
    x = np.asarray(x, dtype=float)
    return x * (1.0 - x.sum(axis=-1, keepdims=True))


def tragedy_ne(n: int) -> TragedyOutcome:
    TragedyParams(n)
    x = Fraction(1, n + 1)
    return TragedyOutcome(x, n * x, x * x, n * x * x)


def tragedy_so(n: int) -> TragedyOutcome:
    TragedyParams(n)
    x = Fraction(1, 2 * n)
    return TragedyOutcome(x, Fraction(1, 2), Fraction(1, 4 * n), Fraction(1, 4))


def tragedy_pcle(n: int, m: int) -> TragedyPcle:
    """Closed-form PCLE with m cooperators leading n - m followers.

    Followers reply x_j = (1 - X_C) / (n - m + 1); the coalition then
    maximises X_C (1 - X_C) / (n - m + 1), so X_C = 1/2.
    """
    TragedyParams(n, m)
    f = n - m + 1
    X_C = Fraction(1, 2)
    x_NC = Fraction(1, 2 * f)
    X_NC = (n - m) * x_NC
    return TragedyPcle(
        m=m,
        x_C=Fraction(1, 2 * m),
        x_NC=x_NC,
        X_C=X_C,
        X_NC=X_NC,
        X_N=X_C + X_NC,
        pi_C=Fraction(1, 4 * m * f),
        pi_NC=Fraction(1, 4 * f * f),
    )


def tragedy_closed_forms(n: int, m: int | None = None) -> dict:
    out = {"ne": tragedy_ne(n), "so": tragedy_so(n)}
    if m is not None:
        out["pcle"] = tragedy_pcle(n, m)
    return out


@dataclass(frozen=True)
class TragedyStabilityRow:
    m: int
    pcle: TragedyPcle
    internal: bool
    external: bool
    internal_ineq: bool
    external_ineq: bool

    @property
    def stable(self) -> bool:
        return self.internal and self.external


@dataclass(frozen=True)
class TragedyStability:
    n: int
    rows: tuple[TragedyStabilityRow, ...]

    @property
    def stable_sizes(self) -> list[int]:
        return [row.m for row in self.rows if row.stable]

    @property
    def routes_agree(self) -> bool:
        return all(r.internal == r.internal_ineq and r.external == r.external_ineq for r in self.rows)


def tragedy_stability(n: int) -> TragedyStability:
    """Stability of every coalition size 2..n-1, by payoffs and by the reduced inequalities.

    Payoff route: pi_NC(m) >= pi_C(m+1) and pi_C(m) >= pi_NC(m-1), using the
    closed forms at m-1 and m+1 (including the single-leader case m-1 = 1).
    Inequality route: (m+1)/(n-m+1) >= (n-m+1)/(n-m) and
    (n-m+2)/(n-m+1) >= m/(n-m+2).
    """
    TragedyParams(n)
    rows = []
    for m in range(2, n):
        cur, prev, nxt = tragedy_pcle(n, m), tragedy_pcle(n, m - 1), tragedy_pcle(n, m + 1)
        rows.append(
            TragedyStabilityRow(
                m=m,
                pcle=cur,
                internal=cur.pi_C >= prev.pi_NC,
                external=cur.pi_NC >= nxt.pi_C,
                internal_ineq=Fraction(n - m + 2, n - m + 1) >= Fraction(m, n - m + 2),
                external_ineq=Fraction(m + 1, n - m + 1) >= Fraction(n - m + 1, n - m),
            )
        )
    return TragedyStability(n, tuple(rows))


def tragedy_pcle_numeric(n: int, m: int, tol: float = 1e-10) -> dict:
    """PCLE on the original payoffs without the closed forms.

    Followers play the symmetric Nash equilibrium of the conditional game:
    each replies x_j = max(0, (1 - X_C - Y_{-j}) / 2), so the follower total
    solves Y = (n - m) * max(0, 1 - X_C - Y). The coalition maximises
    X_C (1 - X_C - Y(X_C)) by lattice scan and golden section.
    """
    TragedyParams(n, m)
    f = n - m

    def follower_total(X_C):
        return root_increasing(lambda Y: Y - f * max(0.0, 1.0 - X_C - Y), 0.0, float(f))

    def leader(X_C):
        return X_C * (1.0 - X_C - follower_total(X_C))

    best = scan_golden_max(leader, 0.0, float(m), points=1024, tol=tol)
    X_C = best["x"]
    Y = follower_total(X_C)
    x = np.r_[np.full(f, Y / f if f else 0.0), np.full(m, X_C / m)]
    pay = tragedy_payoffs(x)
    return {"x": x, "X_C": X_C, "X_N": float(x.sum()), "pi_NC": float(pay[0]) if f else None, "pi_C": float(pay[-1])}


# -- named social purpose games ---------------------------------------------

def gamma_s(alpha=(1.0, 2.0, 3.0), qbar=None) -> GameSpec:
    """pi_i = alpha_i * sum_j x_j - x_i^2, with qbar = A by default."""
    alpha = [float(a) for a in alpha]
    return make_game(alpha, Linear(1.0, 0.0), Quadratic(1.0, 0.0, 0.0), sum(alpha) if qbar is None else qbar)


def gamma_delta(delta=0.01, alpha=(0.5, 1.5), qbar=1.0) -> GameSpec:
    """pi_i = alpha_i log(x_1 + x_2 + delta) - x_i^(1 + delta)."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    if len(alpha) != 2:
        raise ValueError("gamma_delta is a two-player game")
    return make_game(alpha, Log(1.0, delta), Power(1.0, 1.0 + delta, 0.0), qbar)


def underprovision(alpha=(0.6, 0.7), qbar=1.0) -> GameSpec:
    """H = sum x, g_i = x_i, every alpha_i < 1 with A > 1: NE = 0, SO = qbar."""
    if any(a >= 1 for a in alpha) or sum(alpha) <= 1:
        raise ValueError("underprovision needs every alpha_i < 1 and sum(alpha) > 1")
    return make_game(alpha, Linear(1.0, 0.0), Linear(1.0, 0.0), qbar)


def piecewise() -> GameSpec:
    """Two players, H(t) = min(t, 1), g = x^2, alpha = (1, 1), qbar = 1."""
    H = PiecewiseLinear(((0.0, 0.0), (1.0, 1.0), (2.0, 1.0)))
    return make_game([1.0, 1.0], H, Quadratic(1.0), 1.0)


def hnl() -> GameSpec:
    """Convex benefit H(t) = 2t^2 - 4t, no costs, alpha = (1/2, 1/2): two equilibria."""
    return make_game([0.5, 0.5], Quadratic(2.0, -4.0, 0.0), Constant(0.0), 1.0)


def nu() -> GameSpec:
    """pi_1 = x_2, pi_2 = x_1 + x_2: regular but the follower reply is multi-valued."""
    return make_game([1.0, 1.0], Linear(1.0, 0.0), [Linear(1.0, 0.0), Constant(0.0)], 1.0)


MODELS = {
    "gamma_s": gamma_s,
    "gamma_delta": gamma_delta,
    "underprovision": underprovision,
    "piecewise": piecewise,
    "hnl": hnl,
    "nu": nu,
}


def make_model(name: str, **params) -> GameSpec:
    if name == "tragedy":
        raise UnknownModelError("tragedy is handled by its closed forms; use tragedy_* functions")
    if name not in MODELS:
        raise UnknownModelError(f"unknown model {name!r}; known: {sorted(MODELS) + ['tragedy']}")
    return MODELS[name](**params)
