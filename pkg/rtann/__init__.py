"""Hybrid regression-tree / neural-network regression toolkit."""

__version__ = "0.1.0"
