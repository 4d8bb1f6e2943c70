"""Exact automorphism-invariant fractional perfect matchings of periodic graphs."""

__version__ = "0.1.0"
