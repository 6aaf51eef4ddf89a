"""Quadratic parabolic self-maps of the disk and their weighted composition operators."""

__version__ = "0.1.0"
