"""Command-line front end: ``spg {solve,pcle,stability,oracle}``.

Exit codes: 0 success, 1 input or classification error, 2 solver did not
converge.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import __version__
from . import models
from .game import game_from_dict
from .pcle import NotStrictError, solve_pcle
from .solvers import (
    NotRegularError,
    TooLargeError,
    grid_oracle_argmax,
    grid_oracle_ne,
    lattice_argmax,
    lattice_nash_set,
    maximize_potential,
    solve_ne_fixed_point,
    solve_so,
)
from .stability import stability_scan

EXIT_OK, EXIT_INPUT, EXIT_NOCONV = 0, 1, 2


class InputError(Exception):
    pass


def default_tol(fallback: float = 1e-10) -> float:
    raw = os.environ.get("SPG_DEFAULT_TOL")
    if raw is None:
        return fallback
    try:
        val = float(raw)
    except ValueError:
        raise InputError(f"SPG_DEFAULT_TOL must be a number, got {raw!r}") from None
    if not val > 0:
        raise InputError("SPG_DEFAULT_TOL must be positive")
    return val


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _frac(v: Fraction) -> dict:
    return {"fraction": f"{v.numerator}/{v.denominator}", "value": float(v)}


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return _frac(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


# -- loading ----------------------------------------------------------------

def load_game(args):
    """Return (GameSpec or None for tragedy, description dict)."""
    if args.game and args.model:
        raise InputError("give either --game or --model, not both")
    if args.game:
        try:
            with open(args.game) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read {args.game}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.game}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        try:
            return game_from_dict(doc), {"file": args.game}
        except ValueError as exc:
            raise InputError(f"{args.game}: {exc}") from None
    if not args.model:
        raise InputError("one of --game or --model is required")
    params = {}
    if args.model == "tragedy":
        if args.n is None:
            raise InputError("--model tragedy needs --n")
        try:
            models.TragedyParams(args.n)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        return None, {"model": "tragedy", "n": args.n}
    if args.alpha is not None:
        params["alpha"] = args.alpha
    if args.delta is not None:
        params["delta"] = args.delta
    if args.qbar is not None:
        params["qbar"] = args.qbar
    try:
        game = models.make_model(args.model, **params)
    except models.UnknownModelError as exc:
        raise InputError(str(exc.args[0])) from None
    except (TypeError, ValueError) as exc:
        raise InputError(f"model {args.model}: {exc}") from None
    return game, {"model": args.model, **params}


# -- rendering --------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (bool, np.bool_)):
        return "yes" if v else "no"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.10g}"
    return str(v)


def _table(header, rows) -> str:
    cells = [[_fmt(c) for c in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(header)]
    line = "  ".join(h.ljust(w) for h, w in zip(header, widths))
    out = [line, "-" * len(line)]
    out += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(out)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([("" if c is None else (_fmt(c) if isinstance(c, Fraction) else c)) for c in row])
    return buf.getvalue().rstrip("\n")


def _with_decimals(header, rows, fmt):
    """Pair every rational cell with its decimal value."""
    if fmt == "text":
        return header, [[f"{_fmt(c)} ({float(c):.6g})" if isinstance(c, Fraction) else c for c in r] for r in rows]
    cols = [i for i, c in enumerate(rows[0]) if isinstance(c, Fraction)] if rows else []
    head = list(header) + [f"{header[i]}_decimal" for i in cols]
    return head, [list(r) + [float(r[i]) for i in cols] for r in rows]


def emit(args, command, source, payload, header, rows, title=""):
    if args.format != "json" and rows and any(isinstance(c, Fraction) for c in rows[0]):
        header, rows = _with_decimals(header, rows, args.format)
    if args.format == "json":
        doc = {"meta": {"command": command, "source": source, "version": __version__}, "result": payload}
        if getattr(args, "tol", None) is not None:
            doc["meta"]["tol"] = args.tol
        if not args.no_meta:
            doc["meta"]["timestamp"] = datetime.now(timezone.utc).isoformat()
        print(json.dumps(_jsonable(doc), indent=2, sort_keys=True))
    elif args.format == "csv":
        print(_csv(header, rows))
    else:
        if title:
            print(title)
        print(_table(header, rows))


def _player_rows(game, profile, pay, extra=None):
    rows = []
    for i in range(game.n):
        row = [i + 1, game.perm[i] + 1, game.alpha[i], float(profile[i]), float(pay[i])]
        if extra is not None:
            row.append(extra(i))
        rows.append(row)
    return rows


# -- commands ---------------------------------------------------------------

def cmd_solve(args) -> int:
    game, source = load_game(args)
    tol = args.tol
    if game is None:
        ne, so = models.tragedy_ne(args.n), models.tragedy_so(args.n)
        header = ["outcome", "x_i", "X_N", "pi_i", "sum_pi"]
        rows = [["nash", ne.x, ne.X_N, ne.payoff, ne.total_payoff], ["social_optimum", so.x, so.X_N, so.payoff, so.total_payoff]]
        payload = {"ne": ne.__dict__, "so": so.__dict__}
        emit(args, "solve", source, payload, header, rows, f"tragedy of the commons, n = {args.n}")
        return EXIT_OK
    solver = {"ne": solve_ne_fixed_point, "so": solve_so, "potmax": maximize_potential}[args.what]
    try:
        res = solver(game, tol=tol, max_iter=args.max_iter)
    except NotRegularError as exc:
        raise InputError(f"NotRegularError: {exc}; try `spg oracle`") from None
    header = ["player", "input_label", "alpha", "x", "payoff", "foc_residual"]
    rows = _player_rows(game, res.profile, res.payoffs, lambda i: float(res.foc_residuals[i]))
    title = f"{res.kind}: aggregate {res.aggregate:.10g}, converged {_fmt(res.converged)}"
    emit(args, "solve", source, res.to_dict(), header, rows, title)
    return EXIT_OK if res.converged else EXIT_NOCONV


def _levels(text, n, lo=1):
    if text == "all":
        return list(range(lo, n + 1))
    try:
        k = int(text)
    except ValueError:
        raise InputError(f"--k must be an integer or 'all', got {text!r}") from None
    if not lo <= k <= n:
        raise InputError(f"--k must be in {lo}..{n}, got {k}")
    return [k]


def cmd_pcle(args) -> int:
    game, source = load_game(args)
    if game is None:
        n = args.n
        header = ["m", "x_C", "x_NC", "X_N", "pi_C", "pi_NC", "numeric_pi_C", "numeric_pi_NC"]
        rows, payload = [], []
        for m in _levels(args.k, n):
            cf = models.tragedy_pcle(n, m)
            num = models.tragedy_pcle_numeric(n, m, tol=args.tol)
            rows.append([m, cf.x_C, cf.x_NC, cf.X_N, cf.pi_C, cf.pi_NC, num["pi_C"], num["pi_NC"]])
            payload.append({"closed_form": cf.__dict__, "numeric": num})
        emit(args, "pcle", source, payload, header, rows, f"tragedy of the commons PCLE, n = {n}")
        return EXIT_OK
    header = ["k", "player", "input_label", "role", "alpha", "x", "payoff"]
    rows, payload, ok = [], [], True
    for k in _levels(args.k, game.n):
        try:
            res = solve_pcle(game, k, tol=args.tol)
        except NotStrictError as exc:
            raise InputError(f"NotStrictError: {exc}") from None
        ok &= res.converged
        payload.append(res.to_dict())
        for i in range(game.n):
            role = "cooperator" if i >= game.n - k and k > 1 else "non-cooperator"
            rows.append([k, i + 1, game.perm[i] + 1, role, game.alpha[i], float(res.profile[i]), float(res.payoffs[i])])
    emit(args, "pcle", source, payload if len(payload) > 1 else payload[0], header, rows)
    return EXIT_OK if ok else EXIT_NOCONV


def cmd_stability(args) -> int:
    game, source = load_game(args)
    if game is None:
        st = models.tragedy_stability(args.n)
        header = ["m", "x_C", "x_NC", "X_N", "pi_C", "pi_NC", "stable"]
        rows = [
            [f"{r.m}*" if r.stable else r.m, r.pcle.x_C, r.pcle.x_NC, r.pcle.X_N, r.pcle.pi_C, r.pcle.pi_NC, r.stable]
            for r in st.rows
        ]
        payload = {
            "stable_sizes": st.stable_sizes,
            "routes_agree": st.routes_agree,
            "rows": [
                {**r.pcle.__dict__, "internal": r.internal, "external": r.external, "stable": r.stable}
                for r in st.rows
            ],
        }
        emit(args, "stability", source, payload, header, rows, f"tragedy of the commons, n = {args.n}")
        return EXIT_OK
    try:
        rep = stability_scan(game, solve_tol=args.tol)
    except NotStrictError as exc:
        raise InputError(f"NotStrictError: {exc}") from None
    header = ["k", "internal", "external", "stable", "pi_q_k", "pi_q_km1", "pi_r_k", "pi_r_kp1", "ties"]
    best = max(rep.stable_levels, default=None)
    rows = [
        [
            f"{r.k}*" if r.k == best else r.k,
            r.internal, r.external, r.stable, r.pi_q_k, r.pi_q_km1, r.pi_r_k, r.pi_r_kp1,
            ";".join(r.ties),
        ]
        for r in rep.levels
    ]
    title = f"stable levels: {rep.stable_levels or 'none'}"
    emit(args, "stability", source, rep.to_dict(), header, rows, title)
    return EXIT_OK if all(p.converged for p in rep.pcle.values()) else EXIT_NOCONV


def cmd_oracle(args) -> int:
    game, source = load_game(args)
    try:
        if game is None:
            n = args.n
            grid = np.linspace(0.0, 1.0, args.points)
            if args.objective:
                x, _ = lattice_argmax(lambda X: models.tragedy_payoffs(X).sum(axis=-1), n, grid)
                profiles = x[None, :]
            else:
                profiles = lattice_nash_set(models.tragedy_payoffs, n, grid, args.eps)
        elif args.objective:
            profiles = grid_oracle_argmax(args.objective, game, args.points)[None, :]
        else:
            profiles = grid_oracle_ne(game, args.points, args.eps)
    except (TooLargeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    n = profiles.shape[1]
    header = [f"x{i + 1}" for i in range(n)]
    what = f"argmax of {args.objective}" if args.objective else f"eps-Nash set (eps = {args.eps:g})"
    emit(args, "oracle", source, {"what": what, "profiles": profiles}, header, profiles.tolist(), f"lattice {what}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spg", description="Solvers for social purpose games.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tol=True):
        src = sp.add_argument_group("game source")
        src.add_argument("--game", help="game description JSON file")
        src.add_argument("--model", help="built-in model: " + ", ".join(sorted(models.MODELS) + ["tragedy"]))
        src.add_argument("--alpha", type=_floats, help="comma-separated weights")
        src.add_argument("--n", type=int, help="number of users (tragedy)")
        src.add_argument("--delta", type=float, help="delta (gamma_delta)")
        src.add_argument("--qbar", type=float, help="strategy bound")
        if tol:
            sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--format", choices=["text", "csv", "json"], default="text")
        sp.add_argument("--no-meta", action="store_true", help="omit the timestamp from JSON output")

    sp = sub.add_parser("solve", help="Nash equilibrium, social optimum or potential maximiser")
    common(sp)
    sp.add_argument("--what", choices=["ne", "so", "potmax"], default="ne")
    sp.add_argument("--max-iter", type=int, default=200, help="bisection iteration cap")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("pcle", help="partial cooperative leadership equilibrium")
    common(sp)
    sp.add_argument("--k", default="all", help="level of cooperation or 'all'")
    sp.set_defaults(func=cmd_pcle)

    sp = sub.add_parser("stability", help="stability of every cooperation level")
    common(sp)
    sp.set_defaults(func=cmd_stability)

    sp = sub.add_parser("oracle", help="brute-force lattice oracle (n <= 3)")
    common(sp, tol=False)
    sp.add_argument("--points", type=int, default=101)
    sp.add_argument("--eps", type=float, default=1e-9)
    sp.add_argument("--objective", choices=["potential", "welfare"], help="lattice argmax instead of Nash set")
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if getattr(args, "tol", "absent") is None:
            args.tol = default_tol()
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
