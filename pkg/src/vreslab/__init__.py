"""Bigraded Hilbert functions, Betti tables, and short virtual resolutions
for finite point sets in a product of two projective spaces over GF(p)."""

from .fp import DEFAULT_PRIME, FieldPrime

__version__ = "0.1.0"

__all__ = ["DEFAULT_PRIME", "FieldPrime", "__version__"]
