"""Numerical checks of anti-concentration inequalities: density lower bounds
for weighted sums of ball-uniform vectors, the extremal even log-concave
family, isotropic double cones and cube sections, and Rényi entropy bounds
for smoothed sums."""

from .mathcore import DomainError, McEstimate, RngStream
from .report import VerificationReport

__all__ = ["DomainError", "McEstimate", "RngStream", "VerificationReport"]
