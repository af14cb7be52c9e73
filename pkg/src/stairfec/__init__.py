"""Staircase, feed-forward, and partial feed-forward staircase FEC codes."""

__version__ = "0.1.0"
