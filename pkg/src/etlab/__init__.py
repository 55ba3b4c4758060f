"""Exact algebra for additive bases: polynomial towers, profiles, tree search and simulation."""

__version__ = "0.1.0"
