"""Multiplicative functions in short intervals: tables, variance
experiments, pretentious distances, and the supporting special functions.
"""

__version__ = "0.1.0"
