"""Exact verification of generalized-monomial and derivation identities over Q(t)."""

from fecheck.exactfield import ONE, ZERO, FieldElem, Poly, T, elem

__version__ = "0.1.0"

__all__ = ["ONE", "ZERO", "T", "FieldElem", "Poly", "elem", "__version__"]
