"""Hyperbolic double-coset lattice counting and the analytic pipeline around it."""

__version__ = "0.1.0"

from .numerics import PrecisionContext, Mat2  # noqa: F401
