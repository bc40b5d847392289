"""Compositum discriminant calculus and desk-scale counting for S_n x A fields over Q."""

__version__ = "0.1.0"
