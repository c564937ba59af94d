"""Exact checks of the algebraic laws of differential categories on concrete module models."""

__version__ = "0.1.0"
