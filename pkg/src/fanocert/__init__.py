"""Certified arithmetic for hyperstandard gap minima, Sylvester optima and huge explicit constants."""

__version__ = "0.1.0"
