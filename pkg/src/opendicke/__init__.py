"""Spectral chaos diagnostics for the open Dicke model."""

__version__ = "0.1.0"
