"""Bakry-Emery curvature, resistance metric and diameter bounds on finite weighted graphs."""

__version__ = "1.0.0"
