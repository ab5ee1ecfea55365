"""Entropy and divergence of integers and of ideals in quadratic fields."""

from .arith_core import DomainError, Factorization, factor

__version__ = "0.1.0"

__all__ = ["DomainError", "Factorization", "factor", "__version__"]
