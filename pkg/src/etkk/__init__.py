"""Exact K-theory and KK diagram calculus for one-dimensional NCCW building blocks."""

__version__ = "0.1.0"
