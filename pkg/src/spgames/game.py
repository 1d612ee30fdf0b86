"""Game definition, classification and exact payoff/potential/welfare evaluation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .functions import FunctionSpec, Identity, function_from_dict


@dataclass(frozen=True)
class GameSpec:
    """A social purpose game with payoffs alpha_i * H(sum_j h_j(x_j)) - g_i(x_i).

    Players are stored in ascending order of ``alpha``. ``perm[i]`` is the
    original (input) index of sorted player ``i``.
    """

    qbar: float
    alpha: tuple[float, ...]
    H: FunctionSpec
    h: tuple[FunctionSpec, ...]
    g: tuple[FunctionSpec, ...]
    perm: tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.alpha)
        if n < 2:
            raise ValueError(f"a game needs at least 2 players, got {n}")
        if not self.qbar > 0:
            raise ValueError(f"qbar must be positive, got {self.qbar}")
        if any(not a > 0 for a in self.alpha):
            raise ValueError(f"all weights alpha_i must be positive, got {self.alpha}")
        if len(self.h) != n or len(self.g) != n:
            raise ValueError(f"need {n} h and g functions, got {len(self.h)} and {len(self.g)}")
        if any(b < a for a, b in zip(self.alpha, self.alpha[1:])):
            raise ValueError("alpha must be sorted ascending; build games with make_game()")
        if not self.perm:
            object.__setattr__(self, "perm", tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def weights(self) -> np.ndarray:
        return np.asarray(self.alpha, dtype=float)

    @property
    def total_weight(self) -> float:
        """A = sum of all alpha_i."""
        return float(sum(self.alpha))

    def to_dict(self) -> dict:
        inv = np.argsort(self.perm)
        return {
            "n": self.n,
            "qbar": self.qbar,
            "alpha": [self.alpha[i] for i in inv],
            "H": self.H.to_dict(),
            "h": [self.h[i].to_dict() for i in inv],
            "g": [self.g[i].to_dict() for i in inv],
        }


def make_game(alpha, H, g, qbar, h=None) -> GameSpec:
    """Build a GameSpec, sorting players by alpha and recording the permutation.

    ``g`` and ``h`` may be a single FunctionSpec shared by every player.
    """
    alpha = [float(a) for a in alpha]
    n = len(alpha)
    if isinstance(g, FunctionSpec):
        g = [g] * n
    if h is None:
        h = [Identity()] * n
    elif isinstance(h, FunctionSpec):
        h = [h] * n
    g, h = list(g), list(h)
    if len(g) != n or len(h) != n:
        raise ValueError(f"need {n} h and g functions, got {len(h)} and {len(g)}")
    order = sorted(range(n), key=lambda i: alpha[i])
    return GameSpec(
        qbar=float(qbar),
        alpha=tuple(alpha[i] for i in order),
        H=H,
        h=tuple(h[i] for i in order),
        g=tuple(g[i] for i in order),
        perm=tuple(order),
    )


def game_from_dict(doc: dict) -> GameSpec:
    """Parse a game description; errors name the offending key path."""
    if not isinstance(doc, dict):
        raise ValueError("game description must be an object at the top level")
    for key in ("n", "qbar", "alpha", "H", "g"):
        if key not in doc:
            raise ValueError(f"missing key '{key}'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"'n': expected integer, got {n!r}")
    alpha = doc["alpha"]
    if not isinstance(alpha, list) or len(alpha) != n:
        raise ValueError(f"'alpha': expected array of length {n}")

    def parse_fn(obj, path):
        try:
            return function_from_dict(obj)
        except (ValueError, TypeError) as exc:
            raise ValueError(f"'{path}': {exc}") from None

    def parse_list(key, default=None):
        val = doc.get(key, default)
        if isinstance(val, (str, dict)):
            val = [val] * n
        if not isinstance(val, list) or len(val) != n:
            raise ValueError(f"'{key}': expected array of length {n}")
        return [parse_fn(v, f"{key}[{i}]") for i, v in enumerate(val)]

    H = parse_fn(doc["H"], "H")
    g = parse_list("g")
    h = parse_list("h", "identity")
    try:
        return make_game([float(a) for a in alpha], H, g, float(doc["qbar"]), h=h)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"invalid game: {exc}") from None


# -- strategy profiles ------------------------------------------------------

def check_profile(game: GameSpec, x, atol: float = 1e-12) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != game.n:
        raise ValueError(f"profile has {x.shape[-1]} coordinates, game has {game.n} players")
    if np.any(x < -atol) or np.any(x > game.qbar + atol):
        raise ValueError(f"profile outside [0, {game.qbar}]^{game.n}")
    return x


def aggregate(x, players=None) -> float:
    """X_T = sum of x_i over ``players`` (all players when None)."""
    x = np.asarray(x, dtype=float)
    if players is None:
        return float(x.sum())
    return float(x[list(players)].sum())


# -- classification ---------------------------------------------------------

@dataclass
class GameClass:
    is_regular: bool
    is_strict: bool
    reasons: list[str] = field(default_factory=list)


def classify(game: GameSpec) -> GameClass:
    """Regular: identity h, H nondecreasing and concave, g_i nondecreasing and convex.

    Strict additionally needs every g_i strictly convex and H continuously
    differentiable on [0, n*qbar].
    """
    reasons = []
    strict_reasons = []
    top = game.n * game.qbar
    q = game.qbar
    if not all(isinstance(hi, Identity) for hi in game.h):
        reasons.append("h_i not all identity")
    H = game.H
    if not H.in_domain(0.0, top):
        reasons.append(f"H undefined on [0, {top}]")
    else:
        if not H.is_nondecreasing(0.0, top):
            reasons.append("H not increasing")
        if not H.is_concave(0.0, top):
            reasons.append("H not concave")
        if not H.is_c1(0.0, top):
            strict_reasons.append("H not continuously differentiable")
    for i, gi in enumerate(game.g):
        label = f"g_{i + 1}"
        if not gi.in_domain(0.0, q):
            reasons.append(f"{label} undefined on [0, {q}]")
            continue
        if not gi.is_nondecreasing(0.0, q):
            reasons.append(f"{label} not increasing")
        if not gi.is_convex(0.0, q):
            reasons.append(f"{label} not convex")
        if not gi.is_strictly_convex(0.0, q):
            strict_reasons.append(f"{label} not strictly convex")
    regular = not reasons
    strict = regular and not strict_reasons
    return GameClass(regular, strict, reasons + strict_reasons)


# -- evaluation -------------------------------------------------------------

def _contributions(game, x):
    return np.stack([game.h[i].value(x[..., i]) for i in range(game.n)], axis=-1)


def _costs(game, x):
    return np.stack([game.g[i].value(x[..., i]) for i in range(game.n)], axis=-1)


def payoffs(game: GameSpec, x) -> np.ndarray:
    """All payoffs; ``x`` may carry leading batch axes (..., n)."""
    x = check_profile(game, x)
    benefit = game.H.value(_contributions(game, x).sum(axis=-1))
    return game.weights * np.asarray(benefit)[..., None] - _costs(game, x)


def payoff(game: GameSpec, x, i: int) -> float:
    return float(payoffs(game, x)[i])


def potential(game: GameSpec, x):
    """Weighted potential P(x) = H(sum h_j(x_j)) - sum g_i(x_i) / alpha_i."""
    x = check_profile(game, x)
    benefit = game.H.value(_contributions(game, x).sum(axis=-1))
    return benefit - (_costs(game, x) / game.weights).sum(axis=-1)


def welfare(game: GameSpec, x):
    """W(x) = H(sum h_j(x_j)) - sum g_i(x_i) / A, i.e. total payoff divided by A."""
    x = check_profile(game, x)
    benefit = game.H.value(_contributions(game, x).sum(axis=-1))
    return benefit - _costs(game, x).sum(axis=-1) / game.total_weight


def shadow_prices(game: GameSpec, x) -> np.ndarray:
    """rho_i = g_i'(x_i) / (alpha_i h_i'(x_i)); NaN where h_i'(x_i) = 0."""
    x = check_profile(game, x)
    out = np.empty(game.n)
    for i in range(game.n):
        dh = game.h[i].deriv(x[i])
        dg = game.g[i].deriv(x[i])
        out[i] = np.nan if dh == 0 else dg / (game.alpha[i] * dh)
    return out
