"""Per-pass angle integrals J1, J2 and their limiting values.

J1 = int tan s / sqrt(R) ds and J2 = int cot s / sqrt(R) ds over the basic
domain, so one pass advances s1 by J1 and s2 by C * J2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._kernel import Kernel
from .errors import UnsupportedCase
from .profile import SpinParams, basic_domain, critical_point, is_great_circle_family, threshold

__all__ = [
    "AngleIntegrals",
    "angle_integrals",
    "j1",
    "limit_J1_infinity",
    "limit_J1_threshold",
    "limit_J2_infinity",
    "threshold_limit",
    "NEAR_THRESHOLD_RTOL",
]

NEAR_THRESHOLD_RTOL = 1e-9


@dataclass(frozen=True)
class AngleIntegrals:
    J1: float
    J2: float
    estimated_error: float


def angle_integrals(params: SpinParams, rtol: float = 1e-11) -> AngleIntegrals:
    """J1 and J2 at one parameter point.

    J2 is infinite on the C = k2 = 0 family: cot s / sqrt(R) ~ 1/s^2 at s = 0.
    Within 1e-9 (relative) of the threshold the quadratic-model limits are
    returned instead of quadrature.
    """
    k1, k2, C = params.k1, params.k2, params.C
    m = threshold(k1, k2, C)
    rel = (params.Ctilde - m) / m
    if 0.0 < rel < NEAR_THRESHOLD_RTOL:
        J1 = threshold_limit(k1, k2, C, "tan")
        J2 = math.inf if params.singular_edge else threshold_limit(k1, k2, C, "cot")
        return AngleIntegrals(J1, J2, rel * max(J1, 0.0 if math.isinf(J2) else J2))
    K = Kernel(params, basic_domain(params))
    J1, e1 = K.full("tan", rtol)
    if params.singular_edge:
        return AngleIntegrals(J1, math.inf, e1)
    J2, e2 = K.full("cot", rtol)
    return AngleIntegrals(J1, J2, e1 + e2)


def j1(params: SpinParams, rtol: float = 1e-11) -> float:
    """J1 alone; the scan inside the closure search calls this a lot."""
    m = threshold(params.k1, params.k2, params.C)
    if 0.0 < (params.Ctilde - m) / m < NEAR_THRESHOLD_RTOL:
        return threshold_limit(params.k1, params.k2, params.C, "tan")
    return Kernel(params, basic_domain(params)).full("tan", rtol)[0]


def limit_J1_infinity(k1: int) -> float:
    """J1 as C~ grows without bound, for any k2 and C."""
    return math.pi / (2 * (k1 + 1))


def limit_J1_threshold(k1: int, k2: int, C: float) -> float:
    """Closed-form J1 as C~ decreases to the threshold, for C = 0 or -1."""
    if C == 0.0:
        if k2 == 0:
            return math.pi / (2.0 * math.sqrt(k1 + 1))
        return math.pi / math.sqrt(2.0 * (k1 + 1))
    if C == -1.0:
        return math.sqrt(k2 + 1) * math.pi / math.sqrt(2.0 * (k1 + 1) * (k1 + k2 + 2))
    raise UnsupportedCase("closed-form threshold limit is only available for C = 0 or -1")


def limit_J2_infinity(k2: int, C: float) -> float:
    """Limit of (s2 advance)/C as C~ grows, i.e. pi / (2 |C| (k2 + 1))."""
    if C == 0.0:
        raise UnsupportedCase("J2 limit needs C != 0")
    return math.pi / (2.0 * abs(C) * (k2 + 1))


def threshold_limit(k1: int, k2: int, C: float, kind: str = "tan") -> float:
    """Threshold limit of J1 ("tan") or J2 ("cot") for any C.

    Near the threshold R ~ D(s_C) (eps - P''(s_C) x^2 / 2), so the pass
    integral tends to pi w(s_C) sqrt(2) / sqrt(N(s_C) (ln P)''(s_C)).
    """
    if is_great_circle_family(k2, C):
        if kind == "tan":
            return math.pi / (2.0 * math.sqrt(k1 + 1))
        return math.inf
    s = critical_point(k1, k2, C)
    c, sn = math.cos(s), math.sin(s)
    C2 = C * C
    N = sn * sn + C2 * c * c
    dN = (1.0 - C2) * math.sin(2.0 * s)
    ddN = 2.0 * (1.0 - C2) * math.cos(2.0 * s)
    lnP2 = ddN / N - (dN / N) ** 2 + (2 * k1 + 2) / (c * c) + (2 * k2 + 2) / (sn * sn)
    w = sn / c if kind == "tan" else c / sn
    return math.pi * w * math.sqrt(2.0) / math.sqrt(N * lnP2)
