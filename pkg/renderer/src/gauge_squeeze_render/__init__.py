"""Offline renderer for gauge-squeeze CSV datasets."""

__version__ = "0.1.0"
