"""Parametric scalar function families used for H, h_i and g_i.

Every family evaluates on floats or numpy arrays and provides the value, the
first and second derivative, and a clamped inverse of the first derivative.
Shape and convexity questions are answered analytically per family, never by
sampling.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, ClassVar

import numpy as np

BISECTION_TOL = 1e-12


class DomainError(ValueError):
    """Raised when a function is evaluated outside its domain."""


class NotMonotoneError(ValueError):
    """Raised when inverting a derivative that is decreasing on the interval."""


def _as_array(t):
    return np.asarray(t, dtype=float)


def _out(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


@lru_cache(maxsize=4096)
def _deriv_ends(f, lo: float, hi: float):
    """f'(lo), f'(hi) after checking that f' is nondecreasing in between."""
    if hi < lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if not f.is_convex(lo, hi):
        raise NotMonotoneError(f"{f!r} has a decreasing derivative on [{lo}, {hi}]")
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return float(f._deriv(np.asarray(lo))), float(f._deriv(np.asarray(hi)))


class FunctionSpec:
    """Base class of the closed set of function families."""

    family: ClassVar[str] = ""

    # -- evaluation -----------------------------------------------------
    def value(self, t):
        t_arr = _as_array(t)
        self._check_domain(t_arr)
        return _out(self._value(t_arr), t)

    def deriv(self, t):
        t_arr = _as_array(t)
        self._check_domain(t_arr)
        return _out(self._deriv(t_arr), t)

    def deriv2(self, t):
        t_arr = _as_array(t)
        self._check_domain(t_arr)
        return _out(self._deriv2(t_arr), t)

    def __call__(self, t):
        return self.value(t)

    def inverse_deriv(self, y, lo: float, hi: float):
        """Return t in [lo, hi] with f'(t) = y, clamped to the nearest endpoint.

        Targets below f'(lo) give lo and targets above f'(hi) give hi. Where
        f' is flat at exactly y the lower end of the flat piece is returned.
        """
        d_lo, d_hi = _deriv_ends(self, float(lo), float(hi))
        if np.ndim(y) == 0:
            y = float(y)
            if d_lo == d_hi:
                return float(hi) if y > d_hi else float(lo)
            if y <= d_lo:
                return float(lo)
            if y >= d_hi:
                return float(hi)
            return min(max(float(self._inverse_inner(np.asarray(y), lo, hi)), lo), hi)
        y_arr = _as_array(y)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if d_lo == d_hi:
                t = np.where(y_arr > d_hi, hi, lo)
            else:
                inner = self._inverse_inner(y_arr, lo, hi)
                t = np.where(y_arr <= d_lo, lo, np.where(y_arr >= d_hi, hi, inner))
        return np.clip(t, lo, hi)

    def _inverse_inner(self, y, lo, hi):
        return _bisect_deriv(self._deriv, y, lo, hi)

    # -- domain ---------------------------------------------------------
    def _check_domain(self, t):
        if np.any(np.isnan(t)):
            raise DomainError(f"{self.family}: NaN argument")

    def in_domain(self, lo: float, hi: float) -> bool:
        try:
            self.value(np.array([lo, hi]))
            self.deriv(np.array([lo, hi]))
        except DomainError:
            return False
        return True

    # -- analytic shape rules on [lo, hi] -------------------------------
    def is_nondecreasing(self, lo, hi) -> bool:
        raise NotImplementedError

    def is_convex(self, lo, hi) -> bool:
        raise NotImplementedError

    def is_concave(self, lo, hi) -> bool:
        raise NotImplementedError

    def is_strictly_convex(self, lo, hi) -> bool:
        """f'' > 0 on the open interval (lo, hi)."""
        return False

    def is_c1(self, lo, hi) -> bool:
        return self.in_domain(lo, hi)

    def has_constant_deriv(self, lo, hi) -> bool:
        return False

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        out = {"family": self.family}
        out.update(self.__dict__)
        return out


@dataclass(frozen=True)
class Identity(FunctionSpec):
    family: ClassVar[str] = "identity"

    def _value(self, t):
        return t.copy()

    def _deriv(self, t):
        return np.ones_like(t)

    def _deriv2(self, t):
        return np.zeros_like(t)

    def is_nondecreasing(self, lo, hi):
        return True

    def is_convex(self, lo, hi):
        return True

    def is_concave(self, lo, hi):
        return True

    def has_constant_deriv(self, lo, hi):
        return True


@dataclass(frozen=True)
class Constant(FunctionSpec):
    c: float = 0.0
    family: ClassVar[str] = "constant"

    def _value(self, t):
        return np.full_like(t, self.c)

    def _deriv(self, t):
        return np.zeros_like(t)

    def _deriv2(self, t):
        return np.zeros_like(t)

    def is_nondecreasing(self, lo, hi):
        return True

    def is_convex(self, lo, hi):
        return True

    def is_concave(self, lo, hi):
        return True

    def has_constant_deriv(self, lo, hi):
        return True


@dataclass(frozen=True)
class Linear(FunctionSpec):
    """f(t) = a t + b."""

    a: float
    b: float = 0.0
    family: ClassVar[str] = "linear"

    def _value(self, t):
        return self.a * t + self.b

    def _deriv(self, t):
        return np.full_like(t, self.a)

    def _deriv2(self, t):
        return np.zeros_like(t)

    def is_nondecreasing(self, lo, hi):
        return self.a >= 0

    def is_convex(self, lo, hi):
        return True

    def is_concave(self, lo, hi):
        return True

    def has_constant_deriv(self, lo, hi):
        return True


@dataclass(frozen=True)
class Quadratic(FunctionSpec):
    """f(t) = a t^2 + b t + c."""

    a: float
    b: float = 0.0
    c: float = 0.0
    family: ClassVar[str] = "quadratic"

    def _value(self, t):
        return (self.a * t + self.b) * t + self.c

    def _deriv(self, t):
        return 2.0 * self.a * t + self.b

    def _deriv2(self, t):
        return np.full_like(t, 2.0 * self.a)

    def _inverse_inner(self, y, lo, hi):
        return (y - self.b) / (2.0 * self.a)

    def is_nondecreasing(self, lo, hi):
        return 2 * self.a * lo + self.b >= 0 and 2 * self.a * hi + self.b >= 0

    def is_convex(self, lo, hi):
        return self.a >= 0

    def is_concave(self, lo, hi):
        return self.a <= 0

    def is_strictly_convex(self, lo, hi):
        return self.a > 0

    def has_constant_deriv(self, lo, hi):
        return self.a == 0


@dataclass(frozen=True)
class Power(FunctionSpec):
    """f(t) = coef * (t + shift) ** exponent, defined for t + shift >= 0."""

    coef: float
    exponent: float
    shift: float = 0.0
    family: ClassVar[str] = "power"

    def __post_init__(self):
        if self.exponent <= 0:
            raise ValueError("Power exponent must be positive")

    def _check_domain(self, t):
        super()._check_domain(t)
        u = t + self.shift
        if np.any(u < 0):
            raise DomainError(f"power: t + shift must be >= 0, got min {float(np.min(u))}")

    def _value(self, t):
        return self.coef * np.power(t + self.shift, self.exponent)

    def _deriv(self, t):
        p = self.exponent
        with np.errstate(divide="ignore"):
            return self.coef * p * np.power(t + self.shift, p - 1.0)

    def _deriv2(self, t):
        p = self.exponent
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.coef * p * (p - 1.0) * np.power(t + self.shift, p - 2.0)

    def _inverse_inner(self, y, lo, hi):
        p = self.exponent
        return np.power(y / (self.coef * p), 1.0 / (p - 1.0)) - self.shift

    def _curvature_sign(self):
        return np.sign(self.coef * self.exponent * (self.exponent - 1.0))

    def is_nondecreasing(self, lo, hi):
        return self.coef >= 0

    def is_convex(self, lo, hi):
        return self._curvature_sign() >= 0

    def is_concave(self, lo, hi):
        return self._curvature_sign() <= 0

    def is_strictly_convex(self, lo, hi):
        return self._curvature_sign() > 0 and lo + self.shift >= 0

    def is_c1(self, lo, hi):
        if lo + self.shift < 0:
            return False
        return self.exponent >= 1 or lo + self.shift > 0

    def has_constant_deriv(self, lo, hi):
        return self.exponent == 1 or self.coef == 0


@dataclass(frozen=True)
class Log(FunctionSpec):
    """f(t) = coef * log(t + shift), defined for t > -shift."""

    coef: float
    shift: float = 0.0
    family: ClassVar[str] = "log"

    def _check_domain(self, t):
        super()._check_domain(t)
        if np.any(t + self.shift <= 0):
            raise DomainError(f"log: requires t > {-self.shift}, got min {float(np.min(t))}")

    def _value(self, t):
        return self.coef * np.log(t + self.shift)

    def _deriv(self, t):
        with np.errstate(divide="ignore"):
            return self.coef / (t + self.shift)

    def _deriv2(self, t):
        with np.errstate(divide="ignore"):
            return -self.coef / (t + self.shift) ** 2

    def _inverse_inner(self, y, lo, hi):
        return self.coef / y - self.shift

    def is_nondecreasing(self, lo, hi):
        return self.coef >= 0

    def is_convex(self, lo, hi):
        return self.coef <= 0

    def is_concave(self, lo, hi):
        return self.coef >= 0

    def is_strictly_convex(self, lo, hi):
        return self.coef < 0

    def has_constant_deriv(self, lo, hi):
        return self.coef == 0


@dataclass(frozen=True)
class NegLog(FunctionSpec):
    """f(t) = -coef * log(t), defined for t > 0."""

    coef: float = 1.0
    family: ClassVar[str] = "neglog"

    def _check_domain(self, t):
        super()._check_domain(t)
        if np.any(t <= 0):
            raise DomainError(f"neglog: requires t > 0, got min {float(np.min(t))}")

    def _value(self, t):
        return -self.coef * np.log(t)

    def _deriv(self, t):
        with np.errstate(divide="ignore"):
            return -self.coef / t

    def _deriv2(self, t):
        with np.errstate(divide="ignore"):
            return self.coef / t**2

    def _inverse_inner(self, y, lo, hi):
        return -self.coef / y

    def is_nondecreasing(self, lo, hi):
        return self.coef <= 0

    def is_convex(self, lo, hi):
        return self.coef >= 0

    def is_concave(self, lo, hi):
        return self.coef <= 0

    def is_strictly_convex(self, lo, hi):
        return self.coef > 0

    def has_constant_deriv(self, lo, hi):
        return self.coef == 0


@dataclass(frozen=True)
class PiecewiseLinear(FunctionSpec):
    """Linear interpolation through ``breakpoints``; end slopes extrapolate.

    At an interior breakpoint the derivative is the left slope. At or left of
    the first breakpoint it is the first segment's slope.
    """

    breakpoints: tuple[tuple[float, float], ...]
    family: ClassVar[str] = "piecewise_linear"

    def __post_init__(self):
        pts = tuple((float(t), float(v)) for t, v in self.breakpoints)
        if len(pts) < 2:
            raise ValueError("piecewise_linear needs at least two breakpoints")
        ts = [p[0] for p in pts]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("piecewise_linear breakpoints must be strictly increasing in t")
        object.__setattr__(self, "breakpoints", pts)

    @property
    def knots(self) -> np.ndarray:
        return np.array([p[0] for p in self.breakpoints])

    @property
    def slopes(self) -> np.ndarray:
        ts = self.knots
        vs = np.array([p[1] for p in self.breakpoints])
        return np.diff(vs) / np.diff(ts)

    def _segment(self, t):
        # index of segment whose right end is the first knot >= t (left slope)
        idx = np.searchsorted(self.knots, t, side="left") - 1
        return np.clip(idx, 0, len(self.breakpoints) - 2)

    def _value(self, t):
        ts = self.knots
        vs = np.array([p[1] for p in self.breakpoints])
        seg = self._segment(t)
        return vs[seg] + self.slopes[seg] * (t - ts[seg])

    def _deriv(self, t):
        return self.slopes[self._segment(t)]

    def _deriv2(self, t):
        return np.zeros_like(t)

    def _slopes_on(self, lo, hi):
        seg_lo = int(self._segment(np.asarray(lo)))
        seg_hi = int(self._segment(np.asarray(hi)))
        return self.slopes[seg_lo : seg_hi + 1]

    def is_nondecreasing(self, lo, hi):
        return bool(np.all(self._slopes_on(lo, hi) >= 0))

    def is_convex(self, lo, hi):
        return bool(np.all(np.diff(self._slopes_on(lo, hi)) >= 0))

    def is_concave(self, lo, hi):
        return bool(np.all(np.diff(self._slopes_on(lo, hi)) <= 0))

    def is_c1(self, lo, hi):
        return bool(np.all(np.diff(self._slopes_on(lo, hi)) == 0))

    def has_constant_deriv(self, lo, hi):
        return self.is_c1(lo, hi)

    def to_dict(self):
        return {"family": self.family, "breakpoints": [list(p) for p in self.breakpoints]}


def _bisect_deriv(deriv, y, lo, hi):
    """Vectorised bisection for the smallest t with deriv(t) >= y."""
    y = np.asarray(y, dtype=float)
    a = np.full_like(y, float(lo))
    b = np.full_like(y, float(hi))
    for _ in range(200):
        if np.max(b - a, initial=0.0) <= BISECTION_TOL:
            break
        mid = 0.5 * (a + b)
        below = deriv(mid) < y
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)
    return 0.5 * (a + b)


FAMILIES: dict[str, type[FunctionSpec]] = {
    cls.family: cls
    for cls in (Identity, Constant, Linear, Quadratic, Power, Log, NegLog, PiecewiseLinear)
}


def function_from_dict(obj) -> FunctionSpec:
    """Build a FunctionSpec from its JSON object (or the string "identity")."""
    if isinstance(obj, str):
        obj = {"family": obj}
    if not isinstance(obj, dict) or "family" not in obj:
        raise ValueError(f"function object needs a 'family' key, got {obj!r}")
    params = dict(obj)
    name = str(params.pop("family")).lower()
    if name not in FAMILIES:
        raise ValueError(f"unknown function family {name!r}; expected one of {sorted(FAMILIES)}")
    cls = FAMILIES[name]
    if cls is PiecewiseLinear:
        pts = params.pop("breakpoints", None)
        if params:
            raise ValueError(f"unexpected parameters for {name}: {sorted(params)}")
        return PiecewiseLinear(tuple(tuple(p) for p in pts))
    try:
        kwargs = {k: float(v) for k, v in params.items()}
        return cls(**kwargs)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {name}: {exc}") from None


# Functional aliases; the methods are the primary interface.
def evaluate(f: FunctionSpec, t):
    return f.value(t)


def deriv(f: FunctionSpec, t):
    return f.deriv(t)


def deriv2(f: FunctionSpec, t):
    return f.deriv2(t)


def inverse_deriv(f: FunctionSpec, y, lo: float, hi: float):
    return f.inverse_deriv(y, lo, hi)

