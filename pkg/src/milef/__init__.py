"""Exact polyhedral toolkit for mixed-integer extended formulations."""

__version__ = "0.1.0"
