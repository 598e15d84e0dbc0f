"""Exact GF(2) verification engine for SL2 in characteristic two."""

__version__ = "0.1.0"
