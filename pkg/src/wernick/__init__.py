"""Automated straightedge-and-compass triangle constructions from three located points."""

__version__ = "0.1.0"
