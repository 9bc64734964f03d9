"""
Graded-commutative algebras: presentations, per-degree normal forms, augmentations and
the polynomial subalgebra R.
"""

from .expressions import parse_expression
from .graded_ring import OVER_K, OVER_R, TARGETS, GradedRing
from .presentation import AlgebraPresentation, Generator, GradedElement

__all__ = [
    "AlgebraPresentation",
    "Generator",
    "GradedElement",
    "GradedRing",
    "OVER_K",
    "OVER_R",
    "TARGETS",
    "parse_expression",
]
