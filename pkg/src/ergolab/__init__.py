"""Tracing, specification-like properties, entropy and invariant-measure diagnostics."""

__version__ = "0.1.0"
