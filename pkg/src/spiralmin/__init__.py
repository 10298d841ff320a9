"""Spiral minimal products in spheres: generating curves, closure, checks."""

from .errors import (
    Degenerate,
    DomainError,
    EmptyDomain,
    InfeasibleRatio,
    LeftDomain,
    NonConvergence,
    NoRootFound,
    SpiralminError,
    TargetOutOfRange,
    UnsupportedCase,
)
from .profile import BasicDomain, SpinParams, basic_domain, critical_point, profile_value, threshold

__version__ = "0.1.0"

__all__ = [
    "SpinParams",
    "BasicDomain",
    "basic_domain",
    "critical_point",
    "profile_value",
    "threshold",
    "SpiralminError",
    "DomainError",
    "EmptyDomain",
    "Degenerate",
    "UnsupportedCase",
    "TargetOutOfRange",
    "NoRootFound",
    "NonConvergence",
    "LeftDomain",
    "InfeasibleRatio",
]
