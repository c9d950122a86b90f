"""Workbench for relative interpretations between first-order theories."""

__version__ = "0.1.0"
