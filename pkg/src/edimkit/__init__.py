"""Exact representation invariants and essential-dimension bounds for finite groups."""

__version__ = "0.1.0"
