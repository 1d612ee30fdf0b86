"""Which cooperation levels are stable in random quadratic games?

Draws sorted weight vectors, scans every level numerically, compares with
the closed-form conditions and tallies the stable levels by player count.
"""
from __future__ import annotations

import argparse
from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np

from spgames.models import gamma_s
from spgames.random_games import random_quadratic_alpha
from spgames.stability import quadratic_stability, stability_scan


@dataclass
class Config:
    draws: int = 300
    n_min: int = 3
    n_max: int = 8
    low: float = 0.1
    high: float = 5.0
    seed: int = 0


def main(cfg: Config) -> None:
    rng = np.random.default_rng(cfg.seed)
    tallies: dict[int, Counter] = defaultdict(Counter)
    disagreements = levels = 0
    for _ in range(cfg.draws):
        alpha = random_quadratic_alpha(rng, int(rng.integers(cfg.n_min, cfg.n_max + 1)), cfg.low, cfg.high)
        rep = stability_scan(gamma_s(alpha))
        for rec in rep.levels:
            levels += 1
            disagreements += quadratic_stability(alpha, rec.k) != (rec.internal, rec.external)
        tallies[len(alpha)][tuple(rep.stable_levels)] += 1
    print(f"{cfg.draws} draws, {levels} levels, closed-form disagreements: {disagreements}")
    for n in sorted(tallies):
        common = ", ".join(f"{list(k) or 'none'} x{c}" for k, c in tallies[n].most_common(4))
        print(f"n = {n}: {common}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, val in vars(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(val), default=val)
    main(Config(**vars(ap.parse_args())))
