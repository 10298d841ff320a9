"""Pendulum profile P_C, its critical point, and the basic domain.

The magnitude angle s moves inside the sublevel-complement of

    P_C(s) = (1 + (C^2 - 1) cos^2 s) / (cos^(2k1+2) s * sin^(2k2+2) s)

i.e. where C~ > P_C(s).  Everything below is written in terms of the radicand

    R(s) = C~ cos^(2k1+2) s sin^(2k2+2) s - (1 + (C^2 - 1) cos^2 s)

which is D(s) * (C~ - P_C(s)) with D the denominator of P_C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Degenerate, DomainError, EmptyDomain

__all__ = [
    "SpinParams",
    "BasicDomain",
    "profile_value",
    "profile_numerator",
    "profile_denominator",
    "radicand",
    "radicand_slope",
    "critical_point",
    "threshold",
    "basic_domain",
    "sC_residual",
    "is_great_circle_family",
]

HALF_PI = 0.5 * math.pi
EDGE_EPS = 1e-9
MAX_BISECT = 200
DEGENERATE_RTOL = 1e-12
# s = z_R - u^2 is only resolved to ulp(pi/2) ~ 2e-16 absolute, so a right
# endpoint closer than this to pi/2 would cost more than ~1e-11 relative
EDGE_GAP = 1e-5


@dataclass(frozen=True)
class SpinParams:
    """Full parameter point (k1, k2, C, C~)."""

    k1: int
    k2: int
    C: float
    Ctilde: float

    def __post_init__(self) -> None:
        _check_kC(self.k1, self.k2, self.C)
        if not (math.isfinite(self.Ctilde) and self.Ctilde > 0):
            raise DomainError("Ctilde must be a positive finite number")
        object.__setattr__(self, "k1", int(self.k1))
        object.__setattr__(self, "k2", int(self.k2))
        object.__setattr__(self, "C", float(self.C))
        object.__setattr__(self, "Ctilde", float(self.Ctilde))

    @property
    def singular_edge(self) -> bool:
        """True when C = k2 = 0, where the left end is s = 0 and b changes sign."""
        return is_great_circle_family(self.k2, self.C)

    def with_ctilde(self, Ctilde: float) -> "SpinParams":
        return SpinParams(self.k1, self.k2, self.C, Ctilde)


@dataclass(frozen=True)
class BasicDomain:
    """Pendulum interval (z_L, z_R) with critical point and threshold."""

    z_L: float
    z_R: float
    s_crit: float
    threshold: float

    @property
    def width(self) -> float:
        return self.z_R - self.z_L


def is_great_circle_family(k2: int, C: float) -> bool:
    return k2 == 0 and C == 0.0


def _check_kC(k1, k2, C) -> None:
    if int(k1) != k1 or int(k2) != k2:
        raise DomainError("k1, k2 must be integers")
    if k1 < 0 or k2 < 0:
        raise DomainError("k1, k2 must be nonnegative")
    if not math.isfinite(C):
        raise DomainError("C must be finite")


def _check_open(s: float) -> None:
    if not (0.0 < s < HALF_PI):
        raise DomainError(f"s = {s!r} is outside (0, pi/2)")


def profile_numerator(C: float, s):
    # sin^2 + C^2 cos^2 avoids the cancellation in 1 + (C^2 - 1) cos^2 near s = 0
    return np.sin(s) ** 2 + C * C * np.cos(s) ** 2


def profile_denominator(k1: int, k2: int, s):
    return np.cos(s) ** (2 * k1 + 2) * np.sin(s) ** (2 * k2 + 2)


def profile_value(k1: int, k2: int, C: float, s: float) -> float:
    """P_C(s) on (0, pi/2)."""
    _check_kC(k1, k2, C)
    _check_open(s)
    c, sn = math.cos(s), math.sin(s)
    return (sn * sn + C * C * c * c) / (c ** (2 * k1 + 2) * sn ** (2 * k2 + 2))


def radicand(params: SpinParams, s):
    """R(s) = C~ D(s) - N(s); works on floats and numpy arrays."""
    c = np.cos(s)
    sn = np.sin(s)
    D = c ** (2 * params.k1 + 2) * sn ** (2 * params.k2 + 2)
    N = sn * sn + params.C * params.C * c * c
    return params.Ctilde * D - N


def radicand_slope(params: SpinParams, s: float) -> float:
    """dR/ds."""
    k1, k2, C = params.k1, params.k2, params.C
    c, sn = math.cos(s), math.sin(s)
    D = c ** (2 * k1 + 2) * sn ** (2 * k2 + 2)
    dD = D * (-(2 * k1 + 2) * sn / c + (2 * k2 + 2) * c / sn)
    dN = -(C * C - 1.0) * 2.0 * c * sn
    return params.Ctilde * dD - dN


def _g(k1: int, k2: int, C2: float, s: float) -> float:
    # d/dt log P_C times the numerator, t = cos^2 s; increasing in t
    t = math.cos(s) ** 2
    u = math.sin(s) ** 2
    N = u + C2 * t
    return (C2 - 1.0) - N * ((k1 + 1) / t - (k2 + 1) / u)


def _bisect(f, lo: float, hi: float, max_iter: int = MAX_BISECT) -> tuple[float, float]:
    """Plain bisection; f(lo) and f(hi) must differ in sign.

    Returns the final bracket (lo, hi) ordered so that f(lo) has the sign it
    started with.  Brackets spanning many decades above zero are split
    geometrically.
    """
    flo = f(lo)
    for _ in range(max_iter):
        a, b = min(lo, hi), max(lo, hi)
        # geometric midpoint while the bracket spans decades near zero
        mid = math.sqrt(a * b) if a > 0.0 and b > 4.0 * a else 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def critical_point(k1: int, k2: int, C: float) -> float:
    """Unique minimiser s_C of P_C in (0, pi/2); 0 when C = k2 = 0."""
    _check_kC(k1, k2, C)
    if is_great_circle_family(k2, C):
        return 0.0
    C2 = float(C) * float(C)
    # g < 0 near s = pi/2 (t -> 0) and > 0 near s = 0 (t -> 1)
    lo, hi = _bisect(lambda s: _g(k1, k2, C2, s), 1e-15, HALF_PI - 1e-15)
    return 0.5 * (lo + hi)


def sC_residual(k1: int, k2: int, C: float, s: float) -> float:
    """Cleared-denominator residual of the critical-point identity.

    (C^2 - 1) cos^2 s (2 k1 tan s - (2 k2 + 2) cot s) = -(2k1+2) tan s + (2k2+2) cot s
    """
    tn = math.tan(s)
    ct = 1.0 / tn
    lhs = (C * C - 1.0) * math.cos(s) ** 2 * (2 * k1 * tn - (2 * k2 + 2) * ct)
    rhs = -(2 * k1 + 2) * tn + (2 * k2 + 2) * ct
    return lhs - rhs


def threshold(k1: int, k2: int, C: float) -> float:
    """Minimum value of P_C; 1 for the C = k2 = 0 family."""
    if is_great_circle_family(k2, C):
        return 1.0
    return profile_value(k1, k2, C, critical_point(k1, k2, C))


def basic_domain(params: SpinParams, eps: float = EDGE_EPS, max_iter: int = MAX_BISECT) -> BasicDomain:
    """Connected interval around s_C where R > 0."""
    k1, k2, C = params.k1, params.k2, params.C
    m = threshold(k1, k2, C)
    if params.Ctilde <= m:
        raise EmptyDomain(f"Ctilde = {params.Ctilde!r} <= threshold {m!r}")
    if params.Ctilde - m < DEGENERATE_RTOL * m:
        raise Degenerate("Ctilde is within 1e-12 (relative) of the threshold")

    if params.singular_edge:
        # R = sin^2 s (C~ cos^(2k1+2) s - 1); the second factor has one root
        Ct = params.Ctilde
        lo, hi = _bisect(lambda s: Ct * math.cos(s) ** (2 * k1 + 2) - 1.0, 0.0, HALF_PI, max_iter)
        zR = _closer(lambda s: Ct * math.cos(s) ** (2 * k1 + 2) - 1.0, lo, hi)
        _check_gap(zR)
        return BasicDomain(0.0, zR, 0.0, 1.0)

    sc = critical_point(k1, k2, C)
    R = lambda s: float(radicand(params, s))  # noqa: E731
    lo, hi = _bisect(R, _outer_bracket(R, 0.0, sc, eps), sc, max_iter)
    zL = _closer(R, lo, hi)
    lo, hi = _bisect(R, _outer_bracket(R, HALF_PI, sc, eps), sc, max_iter)
    zR = _closer(R, lo, hi)
    _check_gap(zR)
    return BasicDomain(zL, zR, sc, m)


def _check_gap(zR: float) -> None:
    if HALF_PI - zR < EDGE_GAP:
        raise Degenerate("right endpoint is too close to pi/2 for double precision")


def _outer_bracket(R, edge: float, sc: float, eps: float) -> float:
    # eps from the edge normally suffices; for very large C~ the root can sit
    # closer to the edge than that, so walk eps down until R < 0 there
    e = eps
    while True:
        s = edge + e if edge < sc else edge - e
        if s != edge and R(s) < 0.0:
            return s
        if s == edge or e < 1e-300:
            raise Degenerate("endpoint is not resolvable in double precision")
        e *= 1e-3


def _closer(f, lo: float, hi: float) -> float:
    # pick whichever bracket end has the smaller residual
    return lo if abs(f(lo)) < abs(f(hi)) else hi
