"""Angle rates, one basic-domain pass, and its reflection unfolding.

Along the pendulum, (a, b) = (cos s, sin s) and the two phases obey

    ds1/ds = tan s / sqrt(R(s)),    ds2/ds = C cot s / sqrt(R(s)).

Only one pass z_L -> z_R is ever integrated.  Later passes reuse it: odd
passes run the same samples backwards, and the phases keep growing by
(delta_s1, delta_s2) per pass.

On the C = k2 = 0 family the left end s = 0 is not a turning point.  The
analytic curve crosses to negative s there, so passes 2 and 3 (mod 4) carry
b = -sin(sigma).

Exact evaluation away from the samples goes through a phase chart phi, with
s = c + r sin(phi) (or s = z_R sin(phi) on the C = k2 = 0 family).  The
curve is analytic in phi across turning points, and the finite-difference
oracles use that chart.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from ._kernel import Kernel, adaptive_gl
from .errors import DomainError
from .profile import BasicDomain, SpinParams, basic_domain, radicand_slope

__all__ = [
    "CurveSample",
    "Jet",
    "GammaCurve",
    "PendulumCurve",
    "theta",
    "angle_rates",
    "angle_rate_derivatives",
    "integrate_basic",
    "extend_reflect",
    "perturb_rates",
    "gamma_point",
    "closed_form_angles_00",
]

HALF_PI = 0.5 * math.pi
QUARTER_PI = 0.25 * math.pi


@dataclass(frozen=True)
class CurveSample:
    s: float
    t_arc: float
    a: float
    b: float
    s1: float
    s2: float


@dataclass(frozen=True)
class Jet:
    """Values and two derivatives along the curve in some local parameter."""

    a: float
    da: float
    dda: float
    b: float
    db: float
    ddb: float
    s1: float
    ds1: float
    dds1: float
    s2: float
    ds2: float
    dds2: float

    @property
    def theta(self) -> float:
        return (self.a * self.ds1) ** 2 + (self.b * self.ds2) ** 2


# -- pointwise rates -----------------------------------------------------------


def _interior(params: SpinParams, s: float, domain: BasicDomain | None) -> Kernel:
    domain = domain or basic_domain(params)
    if not (domain.z_L < s < domain.z_R):
        raise DomainError(f"s = {s!r} is not inside ({domain.z_L!r}, {domain.z_R!r})")
    return Kernel(params, domain)


def _R(K: Kernel, s: float) -> float:
    side, off = K.offset(s)
    return float(K.radicand_near(side, off if side == "L" else -off))


def theta(params: SpinParams, s: float, domain: BasicDomain | None = None) -> float:
    """Theta = N(s) / R(s); blows up at the endpoints."""
    K = _interior(params, s, domain)
    N = math.sin(s) ** 2 + params.C**2 * math.cos(s) ** 2
    return N / _R(K, s)


def angle_rates(params: SpinParams, s: float, domain: BasicDomain | None = None) -> tuple[float, float]:
    """(ds1/ds, ds2/ds), with ds1/ds > 0."""
    K = _interior(params, s, domain)
    r = math.sqrt(_R(K, s))
    if params.singular_edge:
        return 1.0 / (math.cos(s) * math.sqrt(params.Ctilde * math.cos(s) ** K.p1 - 1.0)), 0.0
    return math.tan(s) / r, params.C / (math.tan(s) * r)


def angle_rate_derivatives(params: SpinParams, s: float, domain: BasicDomain | None = None) -> tuple[float, float]:
    """(d2s1/ds2, d2s2/ds2), differentiated by hand from the rates."""
    K = _interior(params, s, domain)
    return _rate_jet(params, K, s)[2:]


def _rate_jet(params: SpinParams, K: Kernel, s: float) -> tuple[float, float, float, float]:
    c, sn = math.cos(s), math.sin(s)
    if params.singular_edge:
        # ds1/ds = 1 / (cos s sqrt(E)),  E = C~ cos^p1 s - 1
        p1, Ct = K.p1, params.Ctilde
        E = Ct * c**p1 - 1.0
        dE = -p1 * Ct * c ** (p1 - 1) * sn
        r1 = 1.0 / (c * math.sqrt(E))
        d1 = sn / (c * c * math.sqrt(E)) - 0.5 * dE / (c * E**1.5)
        return r1, 0.0, d1, 0.0
    R = _R(K, s)
    dR = radicand_slope(params, s)
    rt = math.sqrt(R)
    tn = sn / c
    ct = c / sn
    r1 = tn / rt
    r2 = params.C * ct / rt
    d1 = 1.0 / (c * c * rt) - 0.5 * tn * dR / (R * rt)
    d2 = params.C * (-1.0 / (sn * sn * rt) - 0.5 * ct * dR / (R * rt))
    return r1, r2, d1, d2


# -- curves ----------------------------------------------------------------------


class GammaCurve(ABC):
    """Sampled generating curve in S^3 with exact local evaluation."""

    rounds: int

    @property
    @abstractmethod
    def k1(self) -> int: ...

    @property
    @abstractmethod
    def k2(self) -> int: ...

    @abstractmethod
    def arrays(self) -> dict[str, np.ndarray]:
        """Unfolded samples as columns s, t_arc, a, b, s1, s2."""

    @property
    def samples(self) -> list[CurveSample]:
        A = self.arrays()
        return [
            CurveSample(*(float(A[k][i]) for k in ("s", "t_arc", "a", "b", "s1", "s2")))
            for i in range(len(A["s"]))
        ]

    @abstractmethod
    def point(self, xi: float) -> np.ndarray:
        """Exact (gamma1, gamma2) at chart parameter xi."""

    @abstractmethod
    def jet(self, xi: float) -> Jet:
        """Exact jet at chart parameter xi (in a unit-speed (a, b) parameter
        for pendulum curves, in t for steady ones)."""

    @abstractmethod
    def param_of_s(self, s: float) -> float:
        """Chart parameter of a first-pass sample with magnitude angle s."""

    @abstractmethod
    def sample_params(self) -> np.ndarray:
        """Chart parameters of the interior samples."""

    @abstractmethod
    def point_at_t(self, t_arc: float) -> np.ndarray:
        """Interpolated (gamma1, gamma2) at arc length t_arc."""


class PendulumCurve(GammaCurve):
    """Generating curve with varying magnitudes (one pass plus unfolding)."""

    def __init__(
        self,
        params: SpinParams,
        domain: BasicDomain,
        fundamental: dict[str, np.ndarray],
        delta_s1: float,
        delta_s2: float,
        delta_t: float,
        rounds: int = 1,
        rate_scale: float = 1.0,
    ):
        self.params = params
        self.domain = domain
        self._f = fundamental
        self.delta_s1 = delta_s1
        self.delta_s2 = delta_s2
        self.delta_t = delta_t
        self.rounds = rounds
        self.rate_scale = rate_scale
        self._K = Kernel(params, domain)
        self._edge = params.singular_edge
        zL, zR = domain.z_L, domain.z_R
        if self._edge:
            self._c, self._r = 0.0, zR
        else:
            self._c, self._r = 0.5 * (zL + zR), 0.5 * (zR - zL)

    @property
    def k1(self) -> int:
        return self.params.k1

    @property
    def k2(self) -> int:
        return self.params.k2

    def with_rounds(self, rounds: int) -> "PendulumCurve":
        return PendulumCurve(
            self.params, self.domain, self._f, self.delta_s1, self.delta_s2, self.delta_t, rounds, self.rate_scale
        )

    # -- unfolding rule ---------------------------------------------------
    def _pass_shape(self, p: int) -> tuple[bool, float]:
        forward = p % 2 == 0
        bsign = -1.0 if (self._edge and p % 4 in (2, 3)) else 1.0
        return forward, bsign

    def arrays(self) -> dict[str, np.ndarray]:
        f = self._f
        cols: dict[str, list[np.ndarray]] = {k: [] for k in ("s", "t_arc", "a", "b", "s1", "s2")}
        for p in range(self.rounds):
            forward, bsign = self._pass_shape(p)
            if forward:
                s, t, s1, s2 = f["s"], f["t"], f["s1"], f["s2"]
            else:
                s = f["s"][::-1]
                t = self.delta_t - f["t"][::-1]
                s1 = self.delta_s1 - f["s1"][::-1]
                s2 = self.delta_s2 - f["s2"][::-1]
            sl = slice(1, None) if p else slice(None)
            cols["s"].append(s[sl])
            cols["t_arc"].append(p * self.delta_t + t[sl])
            cols["a"].append(np.cos(s[sl]))
            cols["b"].append(bsign * np.sin(s[sl]))
            cols["s1"].append(p * self.delta_s1 + s1[sl])
            cols["s2"].append(p * self.delta_s2 + s2[sl])
        return {k: np.concatenate(v) for k, v in cols.items()}

    # -- interpolation ------------------------------------------------------
    @cached_property
    def _splines(self) -> tuple[CubicSpline, CubicSpline, CubicSpline]:
        f = self._f
        return CubicSpline(f["t"], f["s"]), CubicSpline(f["t"], f["s1"]), CubicSpline(f["t"], f["s2"])

    def point_at_t(self, t_arc: float) -> np.ndarray:
        T = self.delta_t
        if not (0.0 <= t_arc <= self.rounds * T):
            raise DomainError(f"t_arc = {t_arc!r} outside [0, {self.rounds * T!r}]")
        p = min(int(t_arc // T), self.rounds - 1)
        tau = t_arc - p * T
        forward, bsign = self._pass_shape(p)
        sp_s, sp_1, sp_2 = self._splines
        tt = tau if forward else T - tau
        sig = float(sp_s(tt))
        s1 = float(sp_1(tt))
        s2 = float(sp_2(tt))
        if not forward:
            s1, s2 = self.delta_s1 - s1, self.delta_s2 - s2
        s1 += p * self.delta_s1
        s2 += p * self.delta_s2
        return np.array([math.cos(sig) * np.exp(1j * s1), bsign * math.sin(sig) * np.exp(1j * s2)])

    # -- phase chart ----------------------------------------------------------
    def phase_range(self) -> tuple[float, float]:
        if self._edge:
            return 0.0, self.rounds * HALF_PI
        return -HALF_PI, -HALF_PI + self.rounds * math.pi

    def _locate(self, phi: float) -> tuple[int, float, float, float, bool, float]:
        """phi -> (pass, sigma, dist to z_L, dist to z_R, forward, b sign)."""
        r = self._r
        if self._edge:
            p = int(math.floor(phi / HALF_PI))
            psi = phi - math.pi * math.floor(phi / math.pi)
            sig = r * math.sin(psi)
            dL = sig
            dR = 2.0 * r * math.sin(QUARTER_PI - 0.5 * psi) ** 2
            forward = psi < HALF_PI
            bsign = -1.0 if (phi - 2 * math.pi * math.floor(phi / (2 * math.pi))) >= math.pi else 1.0
            return p, sig, dL, dR, forward, bsign
        p = int(math.floor((phi + HALF_PI) / math.pi))
        psi = phi - p * math.pi
        up = 2.0 * r * math.sin(0.5 * psi + QUARTER_PI) ** 2
        down = 2.0 * r * math.sin(QUARTER_PI - 0.5 * psi) ** 2
        forward = p % 2 == 0
        if forward:
            dL, dR = up, down
        else:
            dL, dR = down, up
        sig = self.domain.z_L + dL if dL <= dR else self.domain.z_R - dR
        return p, sig, dL, dR, forward, 1.0

    def _first_pass_angles(self, dL: float, dR: float) -> tuple[float, float]:
        K, lam = self._K, self.rate_scale
        if dL <= dR:
            U = math.sqrt(max(dL, 0.0))
            s1 = lam * adaptive_gl(K.integrand("L", "tan"), 0.0, U)[0]
            s2 = 0.0 if self.params.C == 0 else lam * self.params.C * adaptive_gl(K.integrand("L", "cot"), 0.0, U)[0]
            return s1, s2
        U = math.sqrt(max(dR, 0.0))
        s1 = self.delta_s1 - lam * adaptive_gl(K.integrand("R", "tan"), 0.0, U)[0]
        s2 = (
            0.0
            if self.params.C == 0
            else self.delta_s2 - lam * self.params.C * adaptive_gl(K.integrand("R", "cot"), 0.0, U)[0]
        )
        return s1, s2

    def _angles(self, phi: float) -> tuple[int, float, bool, float, float, float]:
        p, sig, dL, dR, forward, bsign = self._locate(phi)
        s1, s2 = self._first_pass_angles(dL, dR)
        if not forward:
            s1, s2 = self.delta_s1 - s1, self.delta_s2 - s2
        return p, sig, forward, bsign, s1 + p * self.delta_s1, s2 + p * self.delta_s2

    def point(self, phi: float) -> np.ndarray:
        _, sig, _, bsign, s1, s2 = self._angles(phi)
        return np.array([math.cos(sig) * np.exp(1j * s1), bsign * math.sin(sig) * np.exp(1j * s2)])

    def jet(self, phi: float) -> Jet:
        """Jet in the oriented arc parameter of (a, b) at an interior phase."""
        _, sig, forward, bsign, s1, s2 = self._angles(phi)
        zL, zR = self.domain.z_L, self.domain.z_R
        if not (zL < sig < zR) and not (self._edge and sig == 0.0):
            raise DomainError("jet requested at a turning point")
        eps = 1.0 if forward else -1.0
        r1, r2, d1, d2 = _rate_jet(self.params, self._K, sig)
        lam = self.rate_scale
        c, sn = math.cos(sig), math.sin(sig)
        return Jet(
            a=c, da=-eps * sn, dda=-c,
            b=bsign * sn, db=bsign * eps * c, ddb=-bsign * sn,
            s1=s1, ds1=lam * r1, dds1=lam * eps * d1,
            s2=s2, ds2=lam * r2, dds2=lam * eps * d2,
        )  # fmt: skip

    def chart_rate(self, phi: float) -> float:
        """|d sigma / d phi|, the speed of (a, b) in the phase chart."""
        if self._edge:
            return abs(self._r * math.cos(phi))
        p = math.floor((phi + HALF_PI) / math.pi)
        return abs(self._r * math.cos(phi - p * math.pi))

    def param_of_s(self, s: float) -> float:
        if self._edge:
            return math.asin(min(1.0, s / self._r))
        return math.asin(max(-1.0, min(1.0, (s - self._c) / self._r)))

    def _fundamental_psi(self) -> tuple[np.ndarray, np.ndarray]:
        """Pass-local phase of each fundamental sample, forward and reflected."""
        dL, dR = self._f["dL"], self._f["dR"]
        r = self._r
        near_L = dL <= dR
        up = np.arcsin(np.sqrt(np.clip(dL / (2.0 * r), 0.0, 1.0)))
        down = np.arcsin(np.sqrt(np.clip(dR / (2.0 * r), 0.0, 1.0)))
        if self._edge:
            fwd = np.where(near_L, np.arcsin(np.clip(dL / r, 0.0, 1.0)), HALF_PI - 2.0 * down)
            return fwd, math.pi - fwd
        fwd = np.where(near_L, 2.0 * up - HALF_PI, HALF_PI - 2.0 * down)
        return fwd, -fwd

    def sample_phases(self) -> np.ndarray:
        """Phase of every unfolded sample (joints included)."""
        fwd, back = self._fundamental_psi()
        out = []
        for p in range(self.rounds):
            forward, _ = self._pass_shape(p)
            psi = fwd if forward else back[::-1]
            sl = slice(1, None) if p else slice(None)
            base = (p // 2) * math.pi if self._edge else p * math.pi
            out.append(base + psi[sl])
        return np.concatenate(out)

    def sample_params(self) -> np.ndarray:
        A = self.arrays()
        phases = self.sample_phases()
        zL, zR = self.domain.z_L, self.domain.z_R
        # turning points (and b = 0 on the C = k2 = 0 family) are left out
        keep = (A["s"] > zL) & (A["s"] < zR)
        return phases[keep]


# -- construction -------------------------------------------------------------------


def integrate_basic(params: SpinParams, n_samples: int = 512, rate_scale: float = 1.0) -> PendulumCurve:
    """Sample one pass z_L -> z_R with s1 = s2 = 0 at z_L.

    Each half-domain gets a uniform grid in u = sqrt(distance to the end);
    panels between grid points use 16-point Gauss-Legendre.
    """
    if n_samples < 16:
        raise DomainError("n_samples must be at least 16")
    domain = basic_domain(params)
    K = Kernel(params, domain)
    half = n_samples // 2
    lam = rate_scale
    uL = np.linspace(0.0, K.U["L"], half + 1)
    uR = np.linspace(0.0, K.U["R"], n_samples - half + 1)

    def side(tag: str, u: np.ndarray):
        a1 = lam * K.cumulative(tag, "tan", u)
        a2 = np.zeros_like(a1) if params.C == 0 else lam * params.C * K.cumulative(tag, "cot", u)
        t = K.cumulative(tag, "arc", u, lam=lam)
        return a1, a2, t

    L1, L2, Lt = side("L", uL)
    R1, R2, Rt = side("R", uR)
    d1, d2, dt = L1[-1] + R1[-1], L2[-1] + R2[-1], Lt[-1] + Rt[-1]
    sL = domain.z_L + uL * uL
    sR = (domain.z_R - uR * uR)[::-1][1:]
    fundamental = {
        "s": np.concatenate([sL, sR]),
        "t": np.concatenate([Lt, dt - Rt[::-1][1:]]),
        "s1": np.concatenate([L1, d1 - R1[::-1][1:]]),
        "s2": np.concatenate([L2, d2 - R2[::-1][1:]]),
        # exact distances to each end, for phase recovery at turning points
        "dL": np.concatenate([uL * uL, (domain.width - uR * uR)[::-1][1:]]),
        "dR": np.concatenate([domain.width - uL * uL, (uR * uR)[::-1][1:]]),
    }
    # the split point is shared; pin it and the endpoints exactly
    fundamental["s"][0] = domain.z_L
    fundamental["s"][-1] = domain.z_R
    return PendulumCurve(params, domain, fundamental, float(d1), float(d2), float(dt), 1, rate_scale)


def extend_reflect(curve: PendulumCurve, rounds: int) -> PendulumCurve:
    """Curve covering `rounds` passes in total, unfolded by reflection."""
    if curve.rounds != 1:
        raise DomainError("extend_reflect expects a single-pass curve")
    if rounds < 1:
        raise DomainError("rounds must be positive")
    return curve.with_rounds(rounds)


def perturb_rates(curve: PendulumCurve, delta: float, n_samples: int | None = None) -> PendulumCurve:
    """Off-solution companion curve for negative controls.

    The magnitude pendulum keeps C~, while the phase equations in arc length are
    driven by C~ (1 + delta).  In the s parameter this scales both angle rates
    by 1 / sqrt(1 + delta).
    """
    n = n_samples or (len(curve._f["s"]) - 1)
    out = integrate_basic(curve.params, n, rate_scale=1.0 / math.sqrt(1.0 + delta))
    return out.with_rounds(curve.rounds)


def gamma_point(curve: GammaCurve, t_arc: float) -> np.ndarray:
    """Point of S^3 at arc length t_arc as a complex 2-vector."""
    return curve.point_at_t(t_arc)


def closed_form_angles_00(params: SpinParams, s: float) -> tuple[float, float]:
    """Arctan antiderivatives of the rates when k1 = k2 = 0.

    Both share the square root sqrt(R(s)); it is taken from the endpoint
    expansion so that the arctans saturate cleanly at z_L and z_R.
    """
    if params.k1 != 0 or params.k2 != 0:
        raise DomainError("closed forms exist only for k1 = k2 = 0")
    domain = basic_domain(params)
    if not (domain.z_L <= s <= domain.z_R):
        raise DomainError(f"s = {s!r} is outside the basic domain")
    K = Kernel(params, domain)
    side, off = K.offset(s)
    root = math.sqrt(max(float(K.radicand_near(side, off if side == "L" else -off)), 0.0))
    C = params.C
    n1, n2 = closed_form_numerators_00(params, s)
    s1 = -0.5 * math.atan2(n1, 2.0 * root)
    if C == 0.0:
        return s1, 0.0
    s2 = 0.5 * math.atan2(math.copysign(1.0, C) * n2, 2.0 * abs(C) * root)
    return s1, s2


def closed_form_numerators_00(params: SpinParams, s: float) -> tuple[float, float]:
    """Numerators of the two arctan closed forms (k1 = k2 = 0, C != 0)."""
    C, Ct = params.C, params.Ctilde
    c2 = math.cos(s) ** 2
    return -2.0 + (1.0 + Ct - C * C) * c2, -1.0 + Ct - C * C + (1.0 - Ct - C * C) * c2
