"""Pathwidth approximation, obstructions, and containment solvers for semi-complete digraphs."""

__version__ = "0.1.0"
