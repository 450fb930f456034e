"""Exact Space Cover solvers for binary and regular matroids."""

__version__ = "0.1.0"
