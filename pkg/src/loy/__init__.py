"""Analyzer for Loy object-oriented class specifications."""

__version__ = "0.1.0"
