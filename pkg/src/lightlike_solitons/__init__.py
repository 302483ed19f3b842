"""Translating solitons on a light-like direction of Minkowski 3-space."""

__version__ = "0.1.0"
