"""Search random strict games for levels where the coalition contributes less than at Nash.

Prints how often it happens and the worst case found, with the quantities
that drive it: the benefit curvature and how strongly followers react.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from spgames.pcle import solve_pcle
from spgames.random_games import random_strict_game
from spgames.solvers import solve_ne_fixed_point


@dataclass
class Config:
    games: int = 300
    seed: int = 0
    threshold: float = 1e-8


def main(cfg: Config) -> None:
    rng = np.random.default_rng(cfg.seed)
    hits, levels, worst = 0, 0, (0.0, None)
    for trial in range(cfg.games):
        game = random_strict_game(rng)
        ne = solve_ne_fixed_point(game)
        for k in range(2, game.n + 1):
            res = solve_pcle(game, k)
            C = slice(game.n - k, game.n)
            gap = ne.profile[C].sum() - res.leader_aggregate
            coalition_gain = res.payoffs[C].sum() - ne.payoffs[C].sum()
            levels += 1
            if gap > cfg.threshold:
                hits += 1
                if gap > worst[0]:
                    worst = (gap, (trial, k, game, ne, res, coalition_gain))
    print(f"{hits} of {levels} levels ({cfg.games} games) have a smaller coalition total than at Nash")
    if worst[1] is None:
        return
    gap, (trial, k, game, ne, res, gain) = worst
    s = res.aggregate
    slopes = [game.alpha[j] * game.H.deriv2(s) / game.g[j].deriv2(res.profile[j])
              for j in range(game.n - k) if 0 < res.profile[j] < game.qbar]
    print(f"worst: game #{trial}, level {k}, shortfall {gap:.4g}, coalition gain over Nash {gain:.4g}")
    print(f"  H = {game.H}")
    print(f"  follower reaction slopes at the PCLE: {np.round(slopes, 3).tolist()}")
    print(f"  NE profile   {np.round(ne.profile, 4).tolist()}")
    print(f"  PCLE profile {np.round(res.profile, 4).tolist()}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--games", type=int, default=Config.games)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    main(Config(a.games, a.seed))
