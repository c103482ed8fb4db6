"""Bitwisted conjugacy classes and their dual coincidence counts.

Finite groups are handled through multiplication tables and finitely
generated abelian groups through integer matrices. Two infinite families,
B(1, n) and Z^d x|_A Z, get exact normal forms of their own.
"""
from .core import FiniteGroup, GroupMap, reidemeister_number, twisted_classes
from .errors import GroupError, ParseError, ValidationError

__version__ = "0.1.0"

__all__ = ["FiniteGroup", "GroupMap", "GroupError", "ParseError", "ValidationError",
           "reidemeister_number", "twisted_classes", "__version__"]
