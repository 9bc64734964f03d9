"""
Exact rational linear algebra: sparse matrices, subspaces in reduced form, and per-degree
cohomology of cochain complexes.
"""

from .rational_matrix import (
    RationalMatrix,
    Subspace,
    fraction_str,
    image_basis,
    kernel_basis,
    rref,
    solve_linear,
    solve_modulo,
    sparse_vector,
    to_fraction,
)
from .complexes import DegreeSlice, SliceCohomology, map_degrees, slice_cohomology

__all__ = [
    "RationalMatrix",
    "Subspace",
    "DegreeSlice",
    "SliceCohomology",
    "fraction_str",
    "image_basis",
    "kernel_basis",
    "map_degrees",
    "rref",
    "slice_cohomology",
    "solve_linear",
    "solve_modulo",
    "sparse_vector",
    "to_fraction",
]
