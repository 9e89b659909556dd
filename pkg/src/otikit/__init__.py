"""Exact computations with One Tree Island functors on modular representations."""

__version__ = "0.1.0"
