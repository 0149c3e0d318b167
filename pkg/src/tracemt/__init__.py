"""Numerical verification toolkit for sharp trace Moser-Trudinger-Adams inequalities."""

__version__ = "0.1.0"
