"""Exact simulation and local-model synthesis for Clifford quantum networks."""

__version__ = "0.1.0"
