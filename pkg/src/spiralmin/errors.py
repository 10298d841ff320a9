"""Exception types raised across the package."""

from __future__ import annotations


class SpiralminError(Exception):
    """Base class for all package errors."""


class DomainError(SpiralminError, ValueError):
    """An argument lies outside the region where an expression is defined."""


class EmptyDomain(SpiralminError):
    """The pendulum radicand has no positive interval (C~ at or below threshold)."""


class Degenerate(SpiralminError):
    """Pendulum amplitude is below numerical resolution."""


class UnsupportedCase(SpiralminError, ValueError):
    """No closed form is available for the requested parameters."""


class TargetOutOfRange(SpiralminError):
    """A closure target lies outside the open range between the two limits."""


class NoRootFound(SpiralminError):
    """The scan saw no sign change for the requested target."""


class NonConvergence(SpiralminError):
    """Newton iteration did not reach the residual tolerance."""


class LeftDomain(SpiralminError):
    """Newton iterates left the admissible region C > 0, C~ > threshold."""


class InfeasibleRatio(SpiralminError):
    """No steady (a, b) exists for the requested speed ratio."""
