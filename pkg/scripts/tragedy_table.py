"""Print the tragedy-of-the-commons tables: NE/SO totals and PCLE rows per coalition size."""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from spgames.models import tragedy_ne, tragedy_pcle_numeric, tragedy_so, tragedy_stability


@dataclass
class Config:
    n: int = 8
    n_max: int = 12
    numeric: bool = False


def frac(v) -> str:
    return f"{v.numerator}/{v.denominator}"


def main(cfg: Config) -> None:
    print(f"{'n':>3} {'x_NE':>7} {'sum pi_NE':>10} {'x_SO':>7} {'sum pi_SO':>9}")
    for n in range(3, cfg.n_max + 1):
        ne, so = tragedy_ne(n), tragedy_so(n)
        print(f"{n:>3} {frac(ne.x):>7} {frac(ne.total_payoff):>10} {frac(so.x):>7} {frac(so.total_payoff):>9}")
    print()
    st = tragedy_stability(cfg.n)
    print(f"n = {cfg.n}")
    print(f"{'m':>3} {'x_C':>6} {'x_NC':>6} {'X_N':>6} {'pi_C':>6} {'pi_NC':>6}  int ext")
    for r in st.rows:
        p = r.pcle
        star = "*" if r.stable else " "
        print(f"{r.m:>2}{star} {frac(p.x_C):>6} {frac(p.x_NC):>6} {frac(p.X_N):>6} {frac(p.pi_C):>6} {frac(p.pi_NC):>6}"
              f"  {'y' if r.internal else 'n':>3} {'y' if r.external else 'n':>3}")
        if cfg.numeric:
            num = tragedy_pcle_numeric(cfg.n, r.m)
            print(f"     numeric: X_C = {num['X_C']:.10f}, pi_C = {num['pi_C']:.10f}, pi_NC = {num['pi_NC']:.10f}")
    print(f"stable sizes {st.stable_sizes}; payoff and inequality routes agree: {st.routes_agree}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    ap.add_argument("--numeric", action="store_true", help="also solve each row numerically")
    a = ap.parse_args()
    main(Config(a.n, a.n_max, a.numeric))
