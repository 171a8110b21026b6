"""Exact deformation-theory engine for the K(1)-module of symbols on the superline."""

__version__ = "0.1.0"
