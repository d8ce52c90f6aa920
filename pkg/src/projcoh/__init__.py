"""Exact sl(m+1)-module computations on tensor densities and differential operators on R^m."""

__version__ = "0.1.0"
