"""Exact Hilbert modular forms for Q(sqrt 5)."""

__version__ = "0.1.0"
