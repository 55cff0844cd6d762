"""Exact computations with the integral symplectic group: lattices, simplex
types, complexes, homology and Steinberg module presentations."""

__version__ = "0.1.0"
