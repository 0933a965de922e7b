"""Exact 2-descent, orbit and density tools for monic even-degree hyperelliptic curves y^2 = f(x)."""
from .errors import DomainError, Refusal, VerificationError
from .poly import CurveInvariants, IntPoly, parse_poly

__version__ = "0.1.0"

__all__ = ["CurveInvariants", "DomainError", "IntPoly", "Refusal", "VerificationError", "parse_poly"]
