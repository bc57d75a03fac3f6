"""Exact metrics and ultrametrics valued in ordered Abelian groups."""

__version__ = "0.1.0"
