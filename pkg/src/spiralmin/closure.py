"""Rational closure: target solving, exact certificates, quotient classes.

All lattice arithmetic runs on fractions.Fraction.  A float never becomes a
rational here; the only rationals are targets supplied by the caller (plus
the C = -1 partner q2 = -(k1+1)/(k2+1) q1, which is exact by the J1/J2
identity on that family).
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import (
    Degenerate,
    DomainError,
    EmptyDomain,
    LeftDomain,
    NonConvergence,
    NoRootFound,
    TargetOutOfRange,
)
from .profile import SpinParams, threshold
from .quadrature import angle_integrals, j1, limit_J1_infinity, threshold_limit

__all__ = [
    "QuotientClass",
    "Symmetry",
    "ClosureCertificate",
    "parse_rational",
    "solve_for_target",
    "double_closure_solve",
    "certify_closure",
    "classify_singly",
    "classify_doubly",
    "antipodal_disjoint",
    "ratio_R",
    "build_certificate",
]

SCAN_POINTS = 512
SCAN_SPAN = (-6.0, 6.0)
SCAN_CHUNK = 12.0
MAX_NEWTON = 100
MIN_DAMPING = 2.0**-10


class QuotientClass(str, enum.Enum):
    CYLINDER_GLUE_BOTH_FLIP = "CylinderGlueBothFlip"
    CYLINDER_GLUE_SECOND_FLIP = "CylinderGlueSecondFlip"
    CYLINDER_GLUE_FIRST_FLIP = "CylinderGlueFirstFlip"
    TRIVIAL_CIRCLE_PRODUCT = "TrivialCircleProduct"
    SINGLY_EMBEDDED = "SinglyEmbedded"
    SELF_INTERSECTING = "SelfIntersecting"


class Symmetry(str, enum.Enum):
    ANTIPODAL = "Antipodal"
    NO_ANTIPODAL_PAIRS = "NoAntipodalPairs"
    PARTIAL = "Partial"


@dataclass(frozen=True)
class ClosureCertificate:
    k1: int
    k2: int
    C: float
    Ctilde_solved: float
    q1: Fraction
    q2: Fraction
    rounds_to_close: int
    quotient_class: QuotientClass | None
    antipodal_disjoint: bool

    def to_json(self) -> dict:
        return {
            "k1": self.k1,
            "k2": self.k2,
            "C": self.C,
            "Ctilde": self.Ctilde_solved,
            "q1": _frac_str(self.q1),
            "q2": _frac_str(self.q2),
            "rounds": self.rounds_to_close,
            "class": self.quotient_class.value if self.quotient_class else "Unclassified",
            "antipodal_disjoint": self.antipodal_disjoint,
        }


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str | Fraction | int) -> Fraction:
    """'p/q' or an integer; decimal strings are refused on purpose."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool) or isinstance(text, float):
        raise DomainError(f"closure targets must be exact rationals, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL.match(text)
    if not m:
        raise DomainError(f"not an exact rational 'p/q': {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise DomainError("zero denominator")
    return Fraction(int(m.group(1)), den)


# -- single target ------------------------------------------------------------------


@lru_cache(maxsize=64)
def _scan_chunk(k1: int, k2: int, C: float, lo: float, hi: float, n: int) -> tuple[tuple[float, float], ...]:
    """(x, J1) pairs with C~ = m (1 + 10^x); stops early once C~ is unresolvable."""
    m = threshold(k1, k2, C)
    out = []
    for x in np.linspace(lo, hi, n):
        try:
            out.append((float(x), j1(SpinParams(k1, k2, C, m * (1.0 + 10.0**x)))))
        except (Degenerate, FloatingPointError, OverflowError):
            break
    return tuple(out)


def _roots_in(pairs, k1: int, k2: int, C: float, goal: float, tol: float) -> list[float]:
    m = threshold(k1, k2, C)

    def f(x: float) -> float:
        return j1(SpinParams(k1, k2, C, m * (1.0 + 10.0**x))) - goal

    roots = []
    for (xa, fa), (xb, fb) in zip(pairs, pairs[1:]):
        fa -= goal
        fb -= goal
        if fa == 0.0:
            roots.append(xa)
        elif fa * fb < 0.0:
            roots.append(brentq(f, xa, xb, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
    out = []
    for x in roots:
        Ct = m * (1.0 + 10.0**x)
        if abs(j1(SpinParams(k1, k2, C, Ct)) - goal) < tol:
            out.append(Ct)
    return out


def solve_for_target(
    k1: int,
    k2: int,
    C: float,
    q: Fraction | str,
    *,
    n_scan: int = SCAN_POINTS,
    span: tuple[float, float] = SCAN_SPAN,
    tol: float = 1e-9,
) -> list[float]:
    """All C~ found with J1(C~) = pi q, in increasing order.

    The scan runs over x = log10(C~/m - 1) on `span`.  If it sees no sign
    change it keeps going upward in 12-decade chunks until one appears or C~
    stops being resolvable in double precision.
    """
    q = parse_rational(q)
    goal = math.pi * float(q)
    a, b = sorted((limit_J1_infinity(k1), threshold_limit(k1, k2, C, "tan")))
    if not (a < goal < b):
        raise TargetOutOfRange(f"pi*{q} lies outside ({a!r}, {b!r})")
    lo, hi = span
    pairs = _scan_chunk(k1, k2, float(C), lo, hi, n_scan)
    roots = _roots_in(pairs, k1, k2, C, goal, tol)
    while not roots and len(pairs) == n_scan:
        lo, hi = hi, hi + SCAN_CHUNK
        pairs = _scan_chunk(k1, k2, float(C), lo, hi, n_scan)
        roots = _roots_in(pairs, k1, k2, C, goal, tol)
    if not roots:
        raise NoRootFound(f"no sign change of J1 - pi*{q} on the scan")
    return sorted(roots)


# -- double target ----------------------------------------------------------------------


def _pair(k1: int, k2: int, C: float, y: float) -> np.ndarray:
    m = threshold(k1, k2, C)
    I = angle_integrals(SpinParams(k1, k2, C, m * (1.0 + math.exp(y))))
    return np.array([I.J1, C * I.J2])


def double_closure_solve(
    k1: int,
    k2: int,
    q1: Fraction | str,
    q2: Fraction | str,
    seed: tuple[float, float],
    tol: float = 1e-8,
    max_iter: int = MAX_NEWTON,
) -> tuple[float, float]:
    """Solve J1 = pi q1, C J2 = pi q2 for (C, C~) with C > 0.

    Damped Newton in (C, y), y = ln(C~/m(C) - 1), so every iterate keeps
    C~ above the threshold; the Jacobian is a forward difference.
    """
    q1, q2 = parse_rational(q1), parse_rational(q2)
    C0, Ct0 = seed
    if not (C0 > 0.0):
        raise LeftDomain("seed must have C > 0")
    m0 = threshold(k1, k2, C0)
    if not (Ct0 > m0):
        raise LeftDomain("seed must have C~ above the threshold")
    goal = math.pi * np.array([float(q1), float(q2)])
    z = np.array([C0, math.log(Ct0 / m0 - 1.0)])

    def F(v: np.ndarray) -> np.ndarray:
        return _pair(k1, k2, float(v[0]), float(v[1])) - goal

    def out(v: np.ndarray) -> tuple[float, float]:
        C = float(v[0])
        return C, threshold(k1, k2, C) * (1.0 + math.exp(float(v[1])))

    r = F(z)
    for _ in range(max_iter):
        norm = float(np.max(np.abs(r)))
        if norm < tol:
            return out(z)
        J = np.empty((2, 2))
        for j in range(2):
            h = 1e-6 * max(1.0, abs(z[j]))
            e = np.zeros(2)
            e[j] = h
            J[:, j] = (F(z + e) - r) / h
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        lam = 1.0
        while lam >= MIN_DAMPING:
            trial = z + lam * step
            if trial[0] > 0.0:
                try:
                    rt = F(trial)
                except (EmptyDomain, Degenerate, FloatingPointError):
                    rt = None
                if rt is not None and float(np.max(np.abs(rt))) < norm:
                    z, r = trial, rt
                    break
            lam *= 0.5
        else:
            if z[0] + MIN_DAMPING * step[0] <= 0.0:
                raise LeftDomain("Newton iterates leave C > 0")
            raise NonConvergence("no damped step reduces the residual")
    if float(np.max(np.abs(r))) < tol:
        return out(z)
    raise NonConvergence(f"no convergence after {max_iter} iterations")


def ratio_R(k1: int, k2: int, C: float, Ctilde: float) -> float:
    """C J2 / J1."""
    I = angle_integrals(SpinParams(k1, k2, C, Ctilde))
    return C * I.J2 / I.J1


# -- exact arithmetic ------------------------------------------------------------------------


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def certify_closure(q1: Fraction | str, q2: Fraction | str, pi_identification: bool = True) -> int:
    """Fewest passes after which both angle advances are lattice points.

    With pi-identification the lattice is pi Z (2 l q in Z), otherwise 2 pi Z
    (l q in Z).
    """
    q1, q2 = parse_rational(q1), parse_rational(q2)
    if pi_identification:
        return _lcm(q.denominator // math.gcd(q.denominator, 2) for q in (q1, q2))
    return _lcm(q.denominator for q in (q1, q2))


def classify_singly(q: Fraction | str, symmetry: Symmetry | str) -> QuotientClass:
    q = parse_rational(q)
    symmetry = Symmetry(symmetry)
    if q <= 0:
        raise DomainError("q must be positive")
    if symmetry is Symmetry.PARTIAL:
        return QuotientClass.SELF_INTERSECTING
    if q.numerator != 1:
        return QuotientClass.SELF_INTERSECTING
    if symmetry is Symmetry.ANTIPODAL and q.denominator % 2:
        return QuotientClass.SELF_INTERSECTING
    return QuotientClass.SINGLY_EMBEDDED


def classify_doubly(q1: Fraction | str, q2: Fraction | str) -> QuotientClass:
    """Case split on (tau parity, 2 l tau q2 parity) for q1 = 1/(2 l)."""
    q1, q2 = parse_rational(q1), parse_rational(q2)
    if q1.numerator != 1 or q1.denominator % 2:
        raise DomainError(f"q1 = {q1} is not of the form 1/(2l)")
    two_l = q1.denominator
    tau = q2.denominator // math.gcd(q2.denominator, two_l)
    m = two_l * tau * q2
    assert m.denominator == 1
    odd_tau, odd_m = tau % 2 == 1, m.numerator % 2 == 1
    if odd_tau and odd_m:
        return QuotientClass.CYLINDER_GLUE_BOTH_FLIP
    if odd_m:
        return QuotientClass.CYLINDER_GLUE_SECOND_FLIP
    if odd_tau:
        return QuotientClass.CYLINDER_GLUE_FIRST_FLIP
    return QuotientClass.TRIVIAL_CIRCLE_PRODUCT


def _v2(n: int) -> int:
    return (n & -n).bit_length() - 1


def antipodal_disjoint(q1: Fraction | str, q2: Fraction | str) -> bool:
    """True iff no n >= 1 makes 2 n q1 and 2 n q2 both odd integers.

    2 n q (q = a/d in lowest terms) is an odd integer exactly when d is even
    and 2n has the same 2-adic valuation as d (and d | 2n).  Both can hold at
    once only if the two denominators share that valuation.
    """
    q1, q2 = parse_rational(q1), parse_rational(q2)
    if q1 == 0 or q2 == 0:
        return True
    d1, d2 = q1.denominator, q2.denominator
    if d1 % 2 or d2 % 2:
        return True
    return _v2(d1) != _v2(d2)


def build_certificate(
    k1: int,
    k2: int,
    C: float,
    Ctilde: float,
    q1: Fraction | str,
    q2: Fraction | str,
    symmetry: Symmetry | str = Symmetry.ANTIPODAL,
    pi_identification: bool = True,
) -> ClosureCertificate:
    """Certificate for exact per-pass advances (pi q1, pi q2).

    Singly spiral (q2 = 0) uses the first-factor symmetry; doubly spiral
    needs q1 = 1/(2l) and is left unclassified otherwise.
    """
    q1, q2 = parse_rational(q1), parse_rational(q2)
    if q2 == 0:
        cls = classify_singly(q1, symmetry)
    elif q1.numerator == 1 and q1.denominator % 2 == 0:
        cls = classify_doubly(q1, q2)
    else:
        cls = None
    return ClosureCertificate(
        k1=k1,
        k2=k2,
        C=float(C),
        Ctilde_solved=float(Ctilde),
        q1=q1,
        q2=q2,
        rounds_to_close=certify_closure(q1, q2, pi_identification),
        quotient_class=cls,
        antipodal_disjoint=antipodal_disjoint(q1, q2),
    )
