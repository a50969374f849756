"""Cycle-cancellation solver for the assignment problem and the directed TSP."""

__version__ = "0.1.0"
