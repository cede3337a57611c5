"""Blowup-algebra invariants of homogeneous ideals over prime fields."""

__version__ = "0.1.0"
