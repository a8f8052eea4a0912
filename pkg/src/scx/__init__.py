"""Finite combinatorics of scaled and marked simplicial sets."""

__version__ = "0.1.0"
