"""Enumeration and verification tools for fully leafed tree-like polyforms."""

from leafy.lattice import LatticeKind, Isometry, neighbors, isometry_group, apply
from leafy.polyform import Polyform

__all__ = ["LatticeKind", "Isometry", "Polyform", "neighbors", "isometry_group", "apply"]
__version__ = "0.1.0"
