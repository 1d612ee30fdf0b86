"""Internal/external stability of cooperation levels."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .pcle import CooperationStructure, PcleResult, solve_pcle


@dataclass
class LevelRecord:
    """Stability verdict for one level k (player indices are 0-based).

    ``pi_q_k``/``pi_q_km1``: the marginal cooperator's PCLE payoff at k and
    k-1. ``pi_r_k``/``pi_r_kp1``: the marginal non-cooperator's at k and k+1
    (None at k = n).
    """

    k: int
    internal: bool
    external: bool
    pi_q_k: float
    pi_q_km1: float
    pi_r_k: float | None = None
    pi_r_kp1: float | None = None
    ties: list[str] = field(default_factory=list)

    @property
    def stable(self) -> bool:
        return self.internal and self.external

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "internal": self.internal,
            "external": self.external,
            "stable": self.stable,
            "pi_q_k": self.pi_q_k,
            "pi_q_km1": self.pi_q_km1,
            "pi_r_k": self.pi_r_k,
            "pi_r_kp1": self.pi_r_kp1,
            "ties": list(self.ties),
        }


@dataclass
class StabilityReport:
    levels: list[LevelRecord]
    pcle: dict[int, PcleResult]

    @property
    def stable_levels(self) -> list[int]:
        return [rec.k for rec in self.levels if rec.stable]

    def level(self, k: int) -> LevelRecord:
        return next(rec for rec in self.levels if rec.k == k)

    def to_dict(self) -> dict:
        return {
            "stable_levels": self.stable_levels,
            "levels": [rec.to_dict() for rec in self.levels],
            "pcle": {str(k): res.to_dict() for k, res in sorted(self.pcle.items())},
        }


def level_record(n: int, k: int, results: dict[int, PcleResult], tol: float = 1e-9) -> LevelRecord:
    """Compare the marginal players' payoffs across neighbouring levels."""
    coop = CooperationStructure(n, k)
    q, r = coop.q, coop.r
    pi_q_k = float(results[k].payoffs[q])
    pi_q_km1 = float(results[k - 1].payoffs[q])
    ties = []
    diff = pi_q_k - pi_q_km1
    internal = diff >= -tol
    if abs(diff) <= tol:
        ties.append("internal")
    if r is None:
        return LevelRecord(k, internal, True, pi_q_k, pi_q_km1, ties=ties)
    pi_r_k = float(results[k].payoffs[r])
    pi_r_kp1 = float(results[k + 1].payoffs[r])
    diff = pi_r_k - pi_r_kp1
    external = diff >= -tol
    if abs(diff) <= tol:
        ties.append("external")
    return LevelRecord(k, internal, external, pi_q_k, pi_q_km1, pi_r_k, pi_r_kp1, ties)


def stability_scan(game, tol: float = 1e-9, solve_tol: float = 1e-10) -> StabilityReport:
    """Solve the PCLE once per level 1..n and judge every level 2..n.

    Weak inequalities with ``tol`` of numerical slack; ties count as stable
    and are annotated.
    """
    results = {k: solve_pcle(game, k, tol=solve_tol) for k in range(1, game.n + 1)}
    levels = [level_record(game.n, k, results, tol) for k in range(2, game.n + 1)]
    return StabilityReport(levels, results)


@dataclass
class MarginalConditions:
    internal_lhs: float
    internal_rhs: float
    external_lhs: float | None
    external_rhs: float | None
    internal: bool
    external: bool


def marginal_conditions(game, k, pcle_k, pcle_km1, pcle_kp1=None, tol: float = 1e-9) -> MarginalConditions:
    """Stability written as cost change versus benefit change of the marginal players.

    Internal: (g_q(x_q(k)) - g_q(x_q(k-1))) / alpha_q <= H(X(k)) - H(X(k-1)).
    External: (g_r(x_r(k)) - g_r(x_r(k+1))) / alpha_r <= H(X(k)) - H(X(k+1)),
    which is pi_r(k) >= pi_r(k+1) rearranged.
    Level k-1 = 1 is the Nash equilibrium and level n the social optimum, so
    the boundary levels need no special casing. ``tol`` is payoff slack and
    is divided by the player's weight.
    """
    coop = CooperationStructure(game.n, k)
    q, r = coop.q, coop.r
    H = game.H
    gq, aq = game.g[q], game.alpha[q]
    in_lhs = (gq.value(pcle_k.profile[q]) - gq.value(pcle_km1.profile[q])) / aq
    in_rhs = H.value(pcle_k.aggregate) - H.value(pcle_km1.aggregate)
    internal = in_lhs <= in_rhs + tol / aq
    if r is None:
        return MarginalConditions(float(in_lhs), float(in_rhs), None, None, bool(internal), True)
    if pcle_kp1 is None:
        raise ValueError(f"level {k} < n needs the PCLE at level {k + 1}")
    gr, ar = game.g[r], game.alpha[r]
    ex_lhs = (gr.value(pcle_k.profile[r]) - gr.value(pcle_kp1.profile[r])) / ar
    ex_rhs = H.value(pcle_k.aggregate) - H.value(pcle_kp1.aggregate)
    external = ex_lhs <= ex_rhs + tol / ar
    return MarginalConditions(float(in_lhs), float(in_rhs), float(ex_lhs), float(ex_rhs), bool(internal), bool(external))


def quadratic_stability(alpha, k: int, rtol: float = 1e-12) -> tuple[bool, bool]:
    """Closed-form (internal, external) verdicts for pi_i = alpha_i * sum x - x_i^2.

    Internal: alpha_q >= A_C / (1 + sqrt(2(k-1))); external: alpha_r <= A_C / sqrt(2k),
    with A_C the weight of the coalition. At k = n only the internal test applies.
    ``rtol`` absorbs rounding at exact ties.
    """
    a = np.sort(np.asarray(alpha, dtype=float))
    n = len(a)
    if not 2 <= k <= n:
        raise ValueError(f"level k must be in 2..{n}, got {k}")
    A_C = float(a[n - k :].sum())
    alpha_q = float(a[n - k])
    slack = rtol * A_C
    # multiplied through to avoid dividing
    internal = A_C - alpha_q <= math.sqrt(2 * (k - 1)) * alpha_q + slack
    if k == n:
        return internal, True
    alpha_r = float(a[n - k - 1])
    external = math.sqrt(2 * k) * alpha_r <= A_C + slack
    return internal, external
