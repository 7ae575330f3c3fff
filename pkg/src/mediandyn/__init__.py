"""Median dynamics, majority dynamics and their coin-flip variants on finite graphs."""

__version__ = "0.1.0"
