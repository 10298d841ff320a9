"""Shared singular-endpoint quadrature kernel.

All pendulum integrals have the form  int w(s) / sqrt(R(s)) ds  over part of
(z_L, z_R), with R vanishing linearly at both ends.  With s = z_L + u^2 (or
s = z_R - u^2) the integrand becomes 2u w / sqrt(R), which is smooth in u.

Near an endpoint R is a small difference of O(1) terms.  To keep full relative
precision we never form R(s) directly there; instead R(z + d) - R(z) is
assembled from half-angle identities in d, and R(z) itself (a rounding-level
residual of the root finder) is dropped.  Dropping it shifts the result by
O(|R(z)|), not O(sqrt|R(z)|).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import Degenerate
from .profile import BasicDomain, SpinParams



@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gl_panel(f, a: float, b: float, n: int = 32) -> float:
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    return half * float(np.dot(w, f(0.5 * (a + b) + half * x)))


def adaptive_gl(
    f, a: float, b: float, rtol: float = 1e-11, n: int = 32, max_depth: int = 30, budget: int = 4000
) -> tuple[float, float]:
    """Composite Gauss-Legendre with bisection refinement.

    A panel is accepted when its two halves agree with the whole to within
    rtol times (the panel's own value, or the running global estimate scaled
    by the panel's share of [a, b]).  Once `budget` panels have been spent the
    remaining stack is accepted as is; that only happens when the integrand
    is noisy at the rtol level.  Returns (value, error estimate).
    """
    if b == a:
        return 0.0, 0.0
    L = b - a
    whole = gl_panel(f, a, b, n)
    if not math.isfinite(whole):
        raise FloatingPointError("non-finite integrand")
    scale = abs(whole)
    total = 0.0
    err = 0.0
    spent = 1
    stack = [(a, b, whole, 0)]
    while stack:
        lo, hi, val, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = gl_panel(f, lo, mid, n)
        right = gl_panel(f, mid, hi, n)
        spent += 2
        diff = abs(left + right - val)
        if not math.isfinite(diff):
            raise FloatingPointError("non-finite integrand")
        share = (hi - lo) / L
        tol = rtol * max(abs(left + right), scale * share)
        if diff <= tol or depth >= max_depth or spent >= budget:
            total += left + right
            err += diff
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    return total, err


class Kernel:
    """Integrand factory bound to one parameter point and its basic domain."""

    def __init__(self, params: SpinParams, domain: BasicDomain):
        self.params = params
        self.domain = domain
        k1, k2 = params.k1, params.k2
        self.p1 = 2 * k1 + 2
        self.p2 = 2 * k2 + 2
        self.C2m1 = params.C * params.C - 1.0
        self.edge = params.singular_edge
        if self.edge:
            self.split = 0.5 * domain.z_R
        else:
            self.split = domain.s_crit
        self.U = {
            "L": math.sqrt(self.split - domain.z_L),
            "R": math.sqrt(domain.z_R - self.split),
        }
        self._anchor = {}
        for side, z in (("L", domain.z_L), ("R", domain.z_R)):
            c, sn = math.cos(z), math.sin(z)
            CD = params.Ctilde * c**self.p1 * sn**self.p2
            if not self.edge and not (CD > 0.0 and math.isfinite(CD)):
                raise Degenerate("endpoint weight under/overflows in double precision")
            self._anchor[side] = (z, c, sn, CD)

    # -- radicand ----------------------------------------------------------
    def radicand_near(self, side: str, d):
        """R(z + d) with z the endpoint on `side`, d signed offset."""
        z, cz, sz, CD = self._anchor[side]
        h = 0.5 * d
        sh = np.sin(h)
        mid = z + h
        dcos = -2.0 * np.sin(mid) * sh
        if self.edge:
            # R = sin^2 s (C~ cos^p1 s - 1); E only vanishes at z_R, so it is
            # formed directly near z_L = 0 and as an increment near z_R
            if side == "L":
                return np.sin(z + d) ** 2 * (self.params.Ctilde * np.cos(z + d) ** self.p1 - 1.0)
            E = self.params.Ctilde * cz**self.p1 * np.expm1(self.p1 * np.log1p(dcos / cz))
            return np.sin(z + d) ** 2 * E
        dsin = 2.0 * np.cos(mid) * sh
        dlnD = self.p1 * np.log1p(dcos / cz) + self.p2 * np.log1p(dsin / sz)
        dN = -self.C2m1 * np.sin(2.0 * z + d) * np.sin(d)
        # CD expm1(x), written as exp(log CD + x) - CD once x is large
        big = dlnD > 1.0
        grow = np.where(big, np.exp(math.log(CD) + np.where(big, dlnD, 0.0)) - CD, CD * np.expm1(np.where(big, 0.0, dlnD)))
        return grow - dN

    # -- substituted integrands ---------------------------------------------
    def integrand(self, side: str, kind: str, lam: float = 1.0):
        """u -> 2u w(s) / sqrt(R(s)) for s = z_L + u^2 or z_R - u^2.

        kind "tan" gives ds1/ds, "cot" gives ds2/ds divided by C, and "arc"
        gives dt_arc/ds for angle rates scaled by lam.
        """
        zL, zR = self.domain.z_L, self.domain.z_R
        C2 = self.params.C ** 2
        lam2 = lam * lam
        if side == "L" and self.edge:
            p1 = self.p1
            Ct = self.params.Ctilde

            def f(u):
                s = u * u
                E = Ct * np.cos(s) ** p1 - 1.0
                if kind == "tan":
                    return 2.0 * u / (np.cos(s) * np.sqrt(E))
                if kind == "arc":
                    return 2.0 * u * np.sqrt((E + lam2) / E)
                return 2.0 * u * np.cos(s) / (np.sin(s) ** 2 * np.sqrt(E))

            return f

        sign = 1.0 if side == "L" else -1.0
        z = zL if side == "L" else zR

        def f(u):
            d = sign * u * u
            s = z + d
            R = self.radicand_near(side, d)
            if kind == "tan":
                w = np.tan(s)
            elif kind == "cot":
                w = 1.0 / np.tan(s)
            elif kind == "arc":
                # sqrt(1 + lam^2 Theta) sqrt(R)
                w = np.sqrt(R + lam2 * (np.sin(s) ** 2 + C2 * np.cos(s) ** 2))
            else:
                raise ValueError(kind)
            return 2.0 * u * w / np.sqrt(R)

        return f

    def from_end(self, side: str, kind: str, U: float, rtol: float = 1e-11, lam: float = 1.0) -> tuple[float, float]:
        """Integral from the `side` endpoint over a u-range [0, U]."""
        return adaptive_gl(self.integrand(side, kind, lam), 0.0, U, rtol)

    def full(self, kind: str, rtol: float = 1e-11) -> tuple[float, float]:
        vL, eL = self.from_end("L", kind, self.U["L"], rtol)
        vR, eR = self.from_end("R", kind, self.U["R"], rtol)
        return vL + vR, eL + eR

    def cumulative(self, side: str, kind: str, u_grid: np.ndarray, n: int = 16, lam: float = 1.0) -> np.ndarray:
        """Running integrals from the endpoint at each u in an increasing grid."""
        f = self.integrand(side, kind, lam)
        x, w = gauss_legendre(n)
        a = u_grid[:-1, None]
        b = u_grid[1:, None]
        half = 0.5 * (b - a)
        nodes = 0.5 * (a + b) + half * x[None, :]
        panels = (half[:, 0]) * (f(nodes) @ w)
        return np.concatenate([[0.0], np.cumsum(panels)])

    def offset(self, s: float) -> tuple[str, float]:
        """Nearest-anchor description (side, |distance|) of an interior s."""
        if s <= self.split:
            return "L", s - self.domain.z_L
        return "R", self.domain.z_R - s
