"""Steady magnitudes: constant (a, b) with linear phases s1 = t, s2 = c t."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, InfeasibleRatio
from .pendulum import GammaCurve, Jet

__all__ = [
    "InfiniteRatio",
    "POS_INF",
    "NEG_INF",
    "SteadyCurve",
    "steady_trace",
    "steady_ratio",
    "constant_product_coefficients",
    "steady_curve",
]


@dataclass(frozen=True)
class InfiniteRatio:
    """c = +-infinity, i.e. s1 frozen while s2 moves."""

    sign: int = 1

    def __repr__(self) -> str:
        return "+inf" if self.sign > 0 else "-inf"


POS_INF = InfiniteRatio(1)
NEG_INF = InfiniteRatio(-1)

Ratio = float | int | Fraction | InfiniteRatio


def _check_ab(a: float, b: float) -> None:
    if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
        raise DomainError("a, b must lie in (0, 1)")
    if abs(a * a + b * b - 1.0) > 1e-12:
        raise DomainError("a^2 + b^2 must equal 1")


def steady_trace(k1: int, k2: int, a: float, b: float, c: Ratio) -> float:
    """Trace of the eta_0 shape operator on a steady curve."""
    _check_ab(a, b)
    if isinstance(c, InfiniteRatio):
        return -(b / a) * k1 + (a / b) * (k2 + 1)
    c = float(c)
    return -(b / a) * k1 + (a / b) * k2 + a * b * (c * c - 1.0) / (a * a + b * b * c * c)


def steady_ratio(k1: int, k2: int, c: Ratio) -> tuple[float, float]:
    """The positive (a, b) with zero steady trace.

    x = b^2/a^2 solves k1 c^2 x^2 - ((k2+1) c^2 - (k1+1)) x - k2 = 0.
    The root is taken in the cancellation-free form for either sign of the
    middle coefficient.
    """
    if isinstance(c, InfiniteRatio):
        if k1 == 0:
            raise InfeasibleRatio("c = +-inf needs k1 >= 1")
        x = (k2 + 1) / k1
    else:
        c2 = float(c) ** 2
        A = (k2 + 1) * c2 - (k1 + 1)
        if k1 == 0 or c2 == 0.0:
            x = k2 / -A if A != 0.0 else math.nan
        else:
            disc = math.sqrt(A * A + 4.0 * k1 * k2 * c2)
            x = (A + disc) / (2.0 * k1 * c2) if A >= 0.0 else 2.0 * k2 / (disc - A)
    if not (x > 0.0 and math.isfinite(x)):
        raise InfeasibleRatio(f"no steady pair for (k1, k2, c) = ({k1}, {k2}, {c!r})")
    a = 1.0 / math.sqrt(1.0 + x)
    b = math.sqrt(x) * a
    return a, b


def constant_product_coefficients(k1: int, k2: int) -> tuple[float, float]:
    if k1 + k2 < 1:
        raise DomainError("need k1 + k2 >= 1")
    n = k1 + k2
    return math.sqrt(k1 / n), math.sqrt(k2 / n)


class SteadyCurve(GammaCurve):
    """(a e^{it}, b e^{ict}); the chart parameter is t."""

    def __init__(self, a: float, b: float, c: Ratio, n_samples: int = 512, k1: int = 0, k2: int = 0):
        _check_ab(a, b)
        if isinstance(c, InfiniteRatio):
            raise DomainError("a steady curve needs a finite c")
        if n_samples < 16:
            raise DomainError("n_samples must be at least 16")
        self.a, self.b = float(a), float(b)
        self.c = c
        self.n_samples = n_samples
        self._k1, self._k2 = k1, k2
        self.rounds = 0
        self.speed = math.sqrt(a * a + b * b * float(c) ** 2)

    @property
    def k1(self) -> int:
        return self._k1

    @property
    def k2(self) -> int:
        return self._k2

    @property
    def period(self) -> float | None:
        """Closing t-period 2 pi den(c), or None when c is not given exactly."""
        if isinstance(self.c, (int, Fraction)):
            return 2.0 * math.pi * Fraction(self.c).denominator
        return None

    @property
    def closes(self) -> bool:
        return self.period is not None

    def t_range(self) -> float:
        return self.period or 2.0 * math.pi

    def arrays(self) -> dict[str, np.ndarray]:
        t = np.linspace(0.0, self.t_range(), self.n_samples + 1)
        n = len(t)
        return {
            "s": np.full(n, math.atan2(self.b, self.a)),
            "t_arc": self.speed * t,
            "a": np.full(n, self.a),
            "b": np.full(n, self.b),
            "s1": t,
            "s2": float(self.c) * t,
        }

    def point(self, t: float) -> np.ndarray:
        return np.array([self.a * np.exp(1j * t), self.b * np.exp(1j * float(self.c) * t)])

    def point_at_t(self, t_arc: float) -> np.ndarray:
        return self.point(t_arc / self.speed)

    def jet(self, t: float) -> Jet:
        c = float(self.c)
        return Jet(self.a, 0.0, 0.0, self.b, 0.0, 0.0, t, 1.0, 0.0, c * t, c, 0.0)

    def param_of_s(self, s: float) -> float:
        return 0.0

    def sample_params(self) -> np.ndarray:
        return self.arrays()["s1"][:-1]


def steady_curve(a: float, b: float, c: Ratio, n_samples: int = 512, k1: int = 0, k2: int = 0) -> SteadyCurve:
    return SteadyCurve(a, b, c, n_samples, k1, k2)
