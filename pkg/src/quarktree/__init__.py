"""Adaptive bivariate quarklet tree approximation on the unit square."""

__version__ = "0.1.0"
