"""Exact-arithmetic workbench for line geometry on cubic hypersurfaces."""

__version__ = "0.1.0"
