"""Product immersions G = (gamma1 f1, gamma2 f2) and their minimality checks.

Two independent routes are kept apart on purpose:

* jet-based formulas (shape traces, Legendrian angle, Laplacian brackets)
  use the hand-differentiated angle rates only;
* `mean_curvature_fd` sees nothing but point evaluations of the immersion.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .closure import Symmetry
from .errors import DomainError
from .pendulum import GammaCurve, Jet, PendulumCurve
from .steady import SteadyCurve

__all__ = [
    "FactorImmersion",
    "Equator",
    "Point",
    "CliffordCircle",
    "LegendrianTorus",
    "ProductImmersion",
    "product_eval",
    "shape_traces",
    "sphere_mean_curvature_fd",
    "mean_curvature_fd",
    "legendrian_angle",
    "legendrian_angle_variation",
    "ctotally_real_check",
    "ctotally_real_residual",
    "takahashi_residual",
    "GreatCircleReport",
    "great_circle_check",
    "hopf_project",
    "example3_map",
    "symmetric_steady_map",
    "bk_torus",
]


# -- factors ------------------------------------------------------------------------


class FactorImmersion(ABC):
    kind: str
    intrinsic_dim: int
    ambient_complex_dim: int
    ctotally_real: bool
    antipodal_symmetry: Symmetry

    @abstractmethod
    def __call__(self, x: np.ndarray) -> np.ndarray:
        """Complex point on the unit sphere of C^ambient_complex_dim."""

    @abstractmethod
    def jacobian(self, x: np.ndarray) -> np.ndarray:
        """Complex (ambient, intrinsic) matrix of chart derivatives."""

    def check_chart(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.intrinsic_dim,):
            raise DomainError(f"{self.kind} expects {self.intrinsic_dim} chart coordinates, got {x.shape}")
        return x


class Equator(FactorImmersion):
    """Totally geodesic S^r in R^{r+1}, gnomonic chart centred at e1."""

    kind = "Equator"
    ctotally_real = True
    antipodal_symmetry = Symmetry.ANTIPODAL
    CHART_LIMIT = 1e3

    def __init__(self, r: int):
        if r < 1:
            raise DomainError("Equator needs r >= 1")
        self.r = r
        self.intrinsic_dim = r
        self.ambient_complex_dim = r + 1

    def __call__(self, x):
        x = self.check_chart(x)
        if np.max(np.abs(x)) > self.CHART_LIMIT:
            raise DomainError("gnomonic chart coordinate too large")
        v = np.concatenate([[1.0], x])
        return (v / math.sqrt(1.0 + x @ x)).astype(complex)

    def jacobian(self, x):
        x = self.check_chart(x)
        n2 = 1.0 + x @ x
        v = np.concatenate([[1.0], x])
        J = np.zeros((self.r + 1, self.r))
        J[1:, :] = np.eye(self.r)
        J = J / math.sqrt(n2) - np.outer(v, x) / n2**1.5
        return J.astype(complex)


class Point(FactorImmersion):
    """A point of S^1: f = 1."""

    kind = "Point"
    intrinsic_dim = 0
    ambient_complex_dim = 1
    ctotally_real = True
    antipodal_symmetry = Symmetry.NO_ANTIPODAL_PAIRS

    def __call__(self, x=()):
        self.check_chart(np.zeros(0) if len(np.atleast_1d(x)) == 0 else x)
        return np.array([1.0 + 0.0j])

    def jacobian(self, x=()):
        return np.zeros((1, 0), dtype=complex)


class CliffordCircle(FactorImmersion):
    """x -> (e^{i w x}, e^{-i w x}) / sqrt(2), a Legendrian great circle."""

    kind = "CliffordCircle"
    intrinsic_dim = 1
    ambient_complex_dim = 2
    ctotally_real = True
    antipodal_symmetry = Symmetry.ANTIPODAL

    def __init__(self, frequency: float = 1.0):
        if frequency == 0:
            raise DomainError("frequency must be nonzero")
        self.frequency = float(frequency)

    def __call__(self, x):
        (t,) = self.check_chart(x)
        w = self.frequency
        return np.array([np.exp(1j * w * t), np.exp(-1j * w * t)]) / math.sqrt(2.0)

    def jacobian(self, x):
        (t,) = self.check_chart(x)
        w = self.frequency
        return (np.array([[1j * w * np.exp(1j * w * t)], [-1j * w * np.exp(-1j * w * t)]]) / math.sqrt(2.0))


class LegendrianTorus(FactorImmersion):
    """(e^{i(sqrt3 x - y)}, e^{-i(sqrt3 x + y)}, e^{2iy}) / sqrt(3) in S^5."""

    kind = "LegendrianTorus"
    intrinsic_dim = 2
    ambient_complex_dim = 3
    ctotally_real = True
    antipodal_symmetry = Symmetry.PARTIAL

    _A = np.array([[math.sqrt(3.0), -1.0], [-math.sqrt(3.0), -1.0], [0.0, 2.0]])

    def __call__(self, x):
        x = self.check_chart(x)
        return np.exp(1j * (self._A @ x)) / math.sqrt(3.0)

    def jacobian(self, x):
        x = self.check_chart(x)
        return 1j * self._A * self(x)[:, None]


def ctotally_real_residual(f: FactorImmersion, x) -> float:
    """max_j |Re <i f, df/dx_j>| at one chart point."""
    v = f(x)
    J = f.jacobian(x)
    if J.shape[1] == 0:
        return 0.0
    return float(np.max(np.abs(np.real(np.conj(1j * v) @ J))))


# -- product --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductImmersion:
    curve: GammaCurve
    f1: FactorImmersion
    f2: FactorImmersion

    @property
    def dim(self) -> int:
        return 1 + self.f1.intrinsic_dim + self.f2.intrinsic_dim

    def split(self, u: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        n1 = self.f1.intrinsic_dim
        return float(u[0]), u[1 : 1 + n1], u[1 + n1 :]

    def chart(self, u) -> np.ndarray:
        """Real ambient vector at chart point (xi, x, y), xi the curve chart."""
        xi, x, y = self.split(np.asarray(u, dtype=float))
        g1, g2 = self.curve.point(xi)
        return _realify(np.concatenate([g1 * self.f1(x), g2 * self.f2(y)]))


def _realify(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z.real, z.imag])


def product_eval(prod: ProductImmersion, t_arc: float, x, y) -> np.ndarray:
    """Complex point (gamma1(t) f1(x), gamma2(t) f2(y)) at arc length t_arc."""
    g1, g2 = prod.curve.point_at_t(t_arc)
    return np.concatenate([g1 * prod.f1(np.atleast_1d(x)), g2 * prod.f2(np.atleast_1d(y))])


# -- finite-difference oracle -------------------------------------------------------------


def _fd_derivatives(F, u0: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """X, first derivatives (n, D) and second derivatives (n, n, D); central
    differences combined as (4 D(h/2) - D(h)) / 3."""
    n = len(u0)
    X = F(u0)

    def level(hh: float):
        d1 = np.empty((n, len(X)))
        d2 = np.empty((n, n, len(X)))
        E = np.eye(n) * hh
        plus = [F(u0 + E[i]) for i in range(n)]
        minus = [F(u0 - E[i]) for i in range(n)]
        for i in range(n):
            d1[i] = (plus[i] - minus[i]) / (2 * hh)
            d2[i, i] = (plus[i] - 2 * X + minus[i]) / (hh * hh)
            for j in range(i + 1, n):
                m = (F(u0 + E[i] + E[j]) - F(u0 + E[i] - E[j]) - F(u0 - E[i] + E[j]) + F(u0 - E[i] - E[j])) / (
                    4 * hh * hh
                )
                d2[i, j] = d2[j, i] = m
        return d1, d2

    a1, a2 = level(h)
    b1, b2 = level(0.5 * h)
    return X, (4 * b1 - a1) / 3, (4 * b2 - a2) / 3


def sphere_mean_curvature_fd(F, u0, h: float = 1e-3) -> float:
    """|trace II| of a chart map F: R^n -> unit sphere of R^D, by differences."""
    if not (1e-6 <= h <= 1e-2):
        raise DomainError("h must lie in [1e-6, 1e-2]")
    u0 = np.asarray(u0, dtype=float)
    X, d1, d2 = _fd_derivatives(F, u0, h)
    g = d1 @ d1.T
    if np.linalg.cond(g) > 1e12:
        raise DomainError("chart is degenerate here")
    lap = np.einsum("ij,ijk->k", np.linalg.inv(g), d2)
    # project off the tangent space and the position vector
    basis = np.vstack([d1, X[None, :]])
    Q, _ = np.linalg.qr(basis.T)
    H = lap - Q @ (Q.T @ lap)
    return float(np.linalg.norm(H))


def mean_curvature_fd(prod: ProductImmersion, sample_point, h: float = 1e-3) -> float:
    """Mean curvature norm of G at chart point (xi, x..., y...)."""
    u0 = np.asarray(sample_point, dtype=float)
    if u0.shape != (prod.dim,):
        raise DomainError(f"expected {prod.dim} chart coordinates")
    return sphere_mean_curvature_fd(prod.chart, u0, h)


# -- jet-based checks ---------------------------------------------------------------------


def _jet(curve: GammaCurve, xi: float) -> Jet:
    J = curve.jet(xi)
    if J.a <= 0.0 or J.b == 0.0:
        raise DomainError("jet on a degenerate point (a or b vanishes)")
    return J


def shape_traces(curve: GammaCurve, xi: float, k1: int | None = None, k2: int | None = None) -> tuple[float, float]:
    """(trace A_eta1, trace A_eta0) from the curve jet; both vanish on solutions."""
    k1 = curve.k1 if k1 is None else k1
    k2 = curve.k2 if k2 is None else k2
    J = _jet(curve, xi)
    a, da, dda, b, db, ddb = J.a, J.da, J.dda, J.b, J.db, J.ddb
    p, dp, q, dq = J.ds1, J.dds1, J.ds2, J.dds2
    theta = J.theta
    speed2 = da * da + db * db + theta
    eta1 = (-2 * da * b * p * q - a * b * dp * q + 2 * a * db * p * q + a * b * p * dq) / speed2
    V = da * b - a * db
    box = ((dda - a * p * p) * b - (ddb - b * q * q) * a) - (V / theta) * (
        (2 * da * p + a * dp) * a * p + (2 * db * q + b * dq) * b * q
    )
    eta0 = -k1 * b / a + (k2 * a / b if k2 else 0.0) + box / speed2
    return float(eta1), float(eta0)


def legendrian_angle(curve: GammaCurve, xi: float, k1: int | None = None, k2: int | None = None) -> float:
    """Legendrian angle of G up to an additive constant, in [0, 2 pi)."""
    return _legendrian_raw(curve, xi, k1, k2) % (2 * math.pi)


def _legendrian_raw(curve: GammaCurve, xi: float, k1, k2) -> float:
    k1 = curve.k1 if k1 is None else k1
    k2 = curve.k2 if k2 is None else k2
    J = curve.jet(xi)
    w = (J.a * J.db - J.b * J.da) + 1j * J.a * J.b * (J.ds2 - J.ds1)
    beta_gamma = np.angle(np.exp(1j * (J.s1 + J.s2)) * w)
    return float(k1 * math.pi + k1 * J.s1 + k2 * J.s2 + beta_gamma)


def legendrian_angle_variation(curve: GammaCurve, params=None, k1=None, k2=None) -> float:
    """max - min of the unwrapped Legendrian angle over the given chart points."""
    params = curve.sample_params() if params is None else params
    vals = np.unwrap([_legendrian_raw(curve, float(x), k1, k2) for x in params])
    return float(np.max(vals) - np.min(vals))


def ctotally_real_check(curve: GammaCurve, tol: float = 1e-10) -> bool:
    """max |a^2 s1' + b^2 s2'| over the interior samples is below tol."""
    res = 0.0
    for xi in curve.sample_params():
        J = curve.jet(float(xi))
        res = max(res, abs(J.a * J.a * J.ds1 + J.b * J.b * J.ds2))
    return res < tol


def takahashi_residual(curve: GammaCurve, xi: float, k1: int | None = None, k2: int | None = None) -> tuple[float, float]:
    """|bracket_l + (k1 + k2 + 1)| for both slots, derivatives in t_arc."""
    k1 = curve.k1 if k1 is None else k1
    k2 = curve.k2 if k2 is None else k2
    J = _jet(curve, xi)
    a, da, dda, b, db, ddb = J.a, J.da, J.dda, J.b, J.db, J.ddb
    p, dp, q, dq = J.ds1, J.dds1, J.ds2, J.dds2
    # w = dq/dt_arc and its q-derivative
    speed2 = da * da + db * db + J.theta
    w = 1.0 / math.sqrt(speed2)
    dtheta = 2 * a * da * p * p + 2 * a * a * p * dp + 2 * b * db * q * q + 2 * b * b * q * dq
    dw = -(w**3) * (da * dda + db * ddb + 0.5 * dtheta)
    # log-derivatives of each slot in the curve parameter
    l1 = (da + 1j * a * p) / a
    l2 = (db + 1j * b * q) / b
    ll1 = (dda + 2j * da * p + 1j * a * dp - a * p * p) / a
    ll2 = (ddb + 2j * db * q + 1j * b * dq - b * q * q) / b
    drift = k1 * w * da / a + k2 * w * db / b
    target = -(k1 + k2 + 1)
    out = []
    for k, mag, first, second in ((k1, a, l1, ll1), (k2, b, l2, ll2)):
        g_t = w * first
        g_tt = w * w * second + w * dw * first
        bracket = -k / (mag * mag) + g_tt + drift * g_t
        out.append(abs(bracket - target))
    return float(out[0]), float(out[1])


# -- great circle --------------------------------------------------------------------------


@dataclass(frozen=True)
class GreatCircleReport:
    passed: bool
    curvature_residual: float
    speed_residual: float


def great_circle_check(curve: GammaCurve, h: float = 1e-3, tol_curv: float = 1e-6, tol_speed: float = 1e-8) -> GreatCircleReport:
    """Geodesic test G_tt = -G by differences in the curve chart.

    G_tt is the normal part of G_xixi divided by |G_xi|^2; the speed test
    compares the difference quotient |G_xi| with the jet's arc rate.
    """
    if curve.k1 != 0 or curve.k2 != 0:
        raise DomainError("great_circle_check needs k1 = k2 = 0")
    Fc = lambda u: _realify(curve.point(float(u[0])))  # noqa: E731
    curv = 0.0
    spd = 0.0
    for xi in curve.sample_params():
        X, d1, d2 = _fd_derivatives(Fc, np.array([float(xi)]), h)
        v, acc = d1[0], d2[0, 0]
        s2 = v @ v
        T = v / math.sqrt(s2)
        Gtt = (acc - (acc @ T) * T) / s2
        curv = max(curv, float(np.linalg.norm(Gtt + X)))
        J = curve.jet(float(xi))
        jet_speed = math.sqrt(J.da**2 + J.db**2 + J.theta) * _chart_rate(curve, float(xi))
        spd = max(spd, abs(math.sqrt(s2) - jet_speed) / jet_speed)
    return GreatCircleReport(curv < tol_curv and spd < tol_speed, curv, spd)


def _chart_rate(curve: GammaCurve, xi: float) -> float:
    """d(jet parameter)/d(chart parameter)."""
    if isinstance(curve, PendulumCurve):
        return curve.chart_rate(xi)
    return 1.0


# -- projective and examples ------------------------------------------------------------------


def hopf_project(p) -> np.ndarray:
    """Representative of [p] in CP^m with first nonzero coordinate real positive."""
    p = np.asarray(p, dtype=complex)
    nz = np.flatnonzero(np.abs(p) > 1e-300)
    if nz.size == 0:
        raise DomainError("zero vector has no projective class")
    z = p[nz[0]]
    return p * (abs(z) / z) / np.linalg.norm(p)


def example3_map(m: int):
    """F(x, y) on S^{m-1} x R into S^{2m+1} in C^{m+1}; x a unit vector of R^m."""
    if m < 2:
        raise DomainError("m >= 2")
    d = math.atan(math.sqrt(1.0 / m))
    s, c = math.sin(d), math.cos(d)

    def F(x, y: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.concatenate(
            [c * np.exp(-1j * s**m / c * y) * x, [s * np.exp(1j * s ** (m - 2) * c * y)]]
        )

    return F


def symmetric_steady_map(k1: int, k2: int):
    """(t, x, y) -> (c_d e^{-i q2 t} x, s_d e^{i q1 t} y) for equators S^k1, S^k2,
    with (k1+1)/(k2+1) = q1/q2 in lowest terms and tan^2 d = q2/q1.

    This phase order is the one with a^2 s1' + b^2 s2' = 0.
    """
    g = math.gcd(k1 + 1, k2 + 1)
    q1, q2 = (k1 + 1) // g, (k2 + 1) // g
    d = math.atan(math.sqrt((k2 + 1) / (k1 + 1)))
    s, c = math.sin(d), math.cos(d)

    def F(t: float, x, y) -> np.ndarray:
        return np.concatenate([c * np.exp(-1j * q2 * t) * np.asarray(x, float), s * np.exp(1j * q1 * t) * np.asarray(y, float)])

    return F, q1, q2


def bk_torus(r: float, s_tilde: float, t: float) -> np.ndarray:
    """(r cos t, r sin t, sqrt(1-r^2) cos s~, sqrt(1-r^2) sin s~) as a real 4-vector."""
    rr = math.sqrt(1.0 - r * r)
    return np.array([r * math.cos(t), r * math.sin(t), rr * math.cos(s_tilde), rr * math.sin(s_tilde)])
