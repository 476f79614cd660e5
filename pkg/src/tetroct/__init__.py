"""Blocks and assemblies in the tetrahedral-octahedral honeycomb."""

__version__ = "0.1.0"
