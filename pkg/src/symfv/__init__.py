"""Exact f-vectors of symmetric 3-polytopes: classification, certification, synthesis."""

__version__ = "0.1.0"
