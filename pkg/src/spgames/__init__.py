"""Numerical toolkit for social purpose games: equilibria, partial cooperation, stability."""

__version__ = "0.1.0"

from .functions import FunctionSpec, function_from_dict
from .game import GameSpec, classify, game_from_dict, make_game, payoffs, potential, welfare
from .solvers import maximize_potential, solve_ne_fixed_point, solve_so
from .pcle import solve_pcle
from .stability import quadratic_stability, stability_scan

__all__ = [
    "FunctionSpec", "function_from_dict", "GameSpec", "classify", "game_from_dict", "make_game",
    "payoffs", "potential", "welfare", "maximize_potential", "solve_ne_fixed_point", "solve_so",
    "solve_pcle", "quadratic_stability", "stability_scan",
]
