"""Robust network capacity expansion models and experiment pipeline."""

__version__ = "0.1.0"
