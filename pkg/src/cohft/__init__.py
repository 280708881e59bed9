"""Exact randomized verification of cohomological field theory identities."""

__version__ = "0.1.0"
