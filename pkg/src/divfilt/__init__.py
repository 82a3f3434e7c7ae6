"""Divisorial filtrations, blow-up towers and their Poincaré series, in exact arithmetic."""

__version__ = "0.1.0"
