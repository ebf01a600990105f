"""Neighborly 2d-polytopes with 2d+4 vertices via plane Gale diagrams."""

__version__ = "0.1.0"
