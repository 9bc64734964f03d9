"""
Differential graded algebra computations: cohomology with ring structure, triple Massey
products and pseudo-dual homotopy groups.
"""

from .cdga_engine import CdgaEngine, CdgaInstance, CohomologyTable
from .indecomposables import HomotopyTable, indecomposables_homotopy, is_minimal
from .massey import MasseyResult, massey_triple

__all__ = [
    "CdgaEngine",
    "CdgaInstance",
    "CohomologyTable",
    "HomotopyTable",
    "MasseyResult",
    "indecomposables_homotopy",
    "is_minimal",
    "massey_triple",
]
