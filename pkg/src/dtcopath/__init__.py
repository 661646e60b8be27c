"""Desk-scale design-technology pathfinding toolkit."""

__version__ = "0.1.0"
