"""Independent reference computations used by the tests.

Nothing here imports the quadrature kernel or the root finders of the
package: endpoints come from mpmath root polishing, integrals from mpmath
tanh-sinh, minima from golden-section search.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath as mp
import numpy as np


def mp_profile(k1, k2, C, s):
    return (mp.sin(s) ** 2 + C**2 * mp.cos(s) ** 2) / (mp.cos(s) ** (2 * k1 + 2) * mp.sin(s) ** (2 * k2 + 2))


def golden_min(f, a, b, tol=1e-14):
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    while b - a > tol:
        if f(c) < f(d):
            b, d = d, c
            c = b - g * (b - a)
        else:
            a, c = c, d
            d = a + g * (b - a)
    return 0.5 * (a + b)


def sign_scan_endpoints(k1, k2, C, Ct, n=10**6):
    """Outermost sign changes of the radicand around its positive block."""
    s = np.linspace(0.0, math.pi / 2, n + 1)[1:-1]
    R = Ct * np.cos(s) ** (2 * k1 + 2) * np.sin(s) ** (2 * k2 + 2) - (np.sin(s) ** 2 + C * C * np.cos(s) ** 2)
    pos = np.flatnonzero(R > 0)
    return s[pos[0] - 1], s[pos[0]], s[pos[-1]], s[pos[-1] + 1]


def mp_domain(k1, k2, C, Ct, dps=40):
    """Endpoints polished in extended precision from a coarse sign scan."""
    with mp.workdps(dps):
        Ct = mp.mpf(Ct)
        R = lambda s: Ct * mp.cos(s) ** (2 * k1 + 2) * mp.sin(s) ** (2 * k2 + 2) - (  # noqa: E731
            mp.sin(s) ** 2 + C**2 * mp.cos(s) ** 2
        )
        if C == 0 and k2 == 0:
            # R = sin^2 (Ct cos^(2k1+2) - 1): left root is the double zero at 0
            return mp.mpf(0), mp.acos(Ct ** (-mp.mpf(1) / (2 * k1 + 2)))
        a0, a1, b0, b1 = sign_scan_endpoints(k1, k2, C, float(Ct), 10**5)
        zL = mp.findroot(R, (mp.mpf(a0), mp.mpf(a1)), solver="anderson")
        zR = mp.findroot(R, (mp.mpf(b0), mp.mpf(b1)), solver="anderson")
        return zL, zR


def mp_integrals(k1, k2, C, Ct, dps=30):
    """(J1, J2) by tanh-sinh over the basic domain."""
    with mp.workdps(dps):
        zL, zR = mp_domain(k1, k2, C, Ct, dps + 10)
        Ct = mp.mpf(Ct)

        def R(s):
            return Ct * mp.cos(s) ** (2 * k1 + 2) * mp.sin(s) ** (2 * k2 + 2) - (mp.sin(s) ** 2 + C**2 * mp.cos(s) ** 2)

        if C == 0 and k2 == 0:
            E = lambda s: Ct * mp.cos(s) ** (2 * k1 + 2) - 1  # noqa: E731
            J1 = mp.quad(lambda s: 1 / (mp.cos(s) * mp.sqrt(E(s))), [zL, zR / 2, zR])
            return float(J1), float("inf")
        J1 = mp.quad(lambda s: mp.tan(s) / mp.sqrt(R(s)), [zL, (zL + zR) / 2, zR])
        J2 = mp.quad(lambda s: mp.cot(s) / mp.sqrt(R(s)), [zL, (zL + zR) / 2, zR])
        return float(J1), float(J2)


def brute_rounds(q1: Fraction, q2: Fraction, pi_identification=True, limit=10**4) -> int:
    for l in range(1, limit + 1):
        m = 2 * l if pi_identification else l
        if (m * q1).denominator == 1 and (m * q2).denominator == 1:
            return l
    raise AssertionError("no closure below limit")


def brute_antipodal_disjoint(q1: Fraction, q2: Fraction) -> bool:
    # 2 n q1 and 2 n q2 both odd; the pattern repeats with period lcm of denominators
    period = q1.denominator * q2.denominator // math.gcd(q1.denominator, q2.denominator)
    for n in range(1, period + 1):
        a, b = 2 * n * q1, 2 * n * q2
        if a.denominator == 1 and b.denominator == 1 and a.numerator % 2 and b.numerator % 2:
            return False
    return True


def brute_doubly(q1: Fraction, q2: Fraction) -> str:
    """Walk rounds of 2l passes until the s2 advance is a multiple of pi."""
    two_l = q1.denominator
    tau = 1
    while (two_l * tau * q2).denominator != 1:
        tau += 1
    m = (two_l * tau * q2).numerator
    return {
        (1, 1): "CylinderGlueBothFlip",
        (0, 1): "CylinderGlueSecondFlip",
        (1, 0): "CylinderGlueFirstFlip",
        (0, 0): "TrivialCircleProduct",
    }[(tau % 2, m % 2)]


def brute_singly(q: Fraction, symmetry: str) -> str:
    """Embedded iff some number of passes advances s1 by exactly pi (antipodal
    factor) or by exactly 2 pi with no earlier coincidence."""
    if symmetry == "Partial":
        return "SelfIntersecting"
    hit = Fraction(1, 2) if symmetry == "Antipodal" else Fraction(1)
    n = 1
    while n * q <= hit:
        if n * q == hit:
            return "SinglyEmbedded"
        n += 1
    return "SelfIntersecting"
