"""Exact symbolic machinery for Euler-Poincaré flows on the Lie algebra of symmetric contravariant tensor fields."""

__version__ = "0.1.0"
