"""
Degree slices of cochain complexes and their cohomology.

A ``DegreeSlice`` holds one total degree of a complex: its ordered basis and the matrix of the
differential into the next degree (columns indexed by this basis). ``slice_cohomology`` turns
the incoming and outgoing differentials of a degree into cocycles, coboundaries and a
deterministic set of representative classes.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, List, Optional, Tuple, TypeVar

from eqloop.config.settings import EngineConfig
from eqloop.exceptions import DimensionMismatchError, InvariantError
from eqloop.linalg.rational_matrix import (
    RationalMatrix,
    SparseVector,
    Subspace,
    VectorLike,
    add_scaled,
    image_basis,
    kernel_basis,
    sparse_vector,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class DegreeSlice:
    degree: int
    basis: Tuple[Any, ...]
    differential: RationalMatrix

    def __post_init__(self):
        if self.differential.cols != len(self.basis):
            raise DimensionMismatchError(
                f"Degree {self.degree}: differential has {self.differential.cols} columns "
                f"for a basis of size {len(self.basis)}"
            )

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class SliceCohomology:
    """Cohomology of a single degree, with classes read off in a fixed representative basis"""
    degree: int
    dimension: int
    cocycles: Subspace
    coboundaries: Subspace
    representatives: Tuple[SparseVector, ...]
    representative_pivots: Tuple[int, ...]

    @property
    def betti(self) -> int:
        return len(self.representatives)

    def is_cocycle(self, vector: VectorLike) -> bool:
        return self.cocycles.contains(vector)

    def is_coboundary(self, vector: VectorLike) -> bool:
        return self.coboundaries.contains(vector)

    def classify(self, vector: VectorLike) -> List[Fraction]:
        """
        Coordinates of the class of a cocycle in the representative basis.

        Raises:
            InvariantError: if the vector is not a cocycle
        """
        vector = sparse_vector(vector, self.dimension)
        if not self.cocycles.contains(vector):
            raise InvariantError(f"Vector in degree {self.degree} is not a cocycle", degree=self.degree)
        remainder = self.coboundaries.reduce(vector)
        coordinates = [remainder.get(pivot, Fraction(0)) for pivot in self.representative_pivots]
        check = dict(remainder)
        for coefficient, representative in zip(coordinates, self.representatives):
            add_scaled(check, representative, -coefficient)
        if check:
            raise InvariantError(f"Class decomposition failed in degree {self.degree}", degree=self.degree)
        return coordinates


def slice_cohomology(degree: int, dimension: int,
                     incoming: Optional[RationalMatrix],
                     outgoing: Optional[RationalMatrix]) -> SliceCohomology:
    """
    Compute Z/B in one degree.

    Args:
        degree: Total degree of the slice
        dimension: Size of the slice basis
        incoming: Differential from degree - 1 (rows = dimension), or None when that slice is empty
        outgoing: Differential into degree + 1 (cols = dimension), or None when that slice is empty

    Returns:
        SliceCohomology whose representatives are the reduced remainders of cocycles modulo coboundaries
    """
    if incoming is not None and incoming.rows != dimension:
        raise DimensionMismatchError(f"Incoming differential has {incoming.rows} rows, expected {dimension}")
    if outgoing is not None and outgoing.cols != dimension:
        raise DimensionMismatchError(f"Outgoing differential has {outgoing.cols} cols, expected {dimension}")

    if outgoing is None or outgoing.is_zero():
        cocycles = Subspace.full(dimension)
    else:
        cocycles = kernel_basis(outgoing)
    if incoming is None or incoming.is_zero():
        coboundaries = Subspace.zero(dimension)
    else:
        coboundaries = image_basis(incoming)

    if not coboundaries.is_subspace_of(cocycles):
        raise InvariantError(f"Differential does not square to zero into degree {degree}", degree=degree)

    remainders = [coboundaries.reduce(z) for z in cocycles.basis]
    classes = Subspace.span(remainders, dimension)
    logger.debug(f"Degree {degree}: dim {dimension}, Z {cocycles.dim}, B {coboundaries.dim}, H {classes.dim}")
    return SliceCohomology(
        degree=degree,
        dimension=dimension,
        cocycles=cocycles,
        coboundaries=coboundaries,
        representatives=classes.basis,
        representative_pivots=classes.pivots,
    )


def map_degrees(func: Callable[[T], R], items: Iterable[T], max_workers: Optional[int] = None) -> List[R]:
    """Evaluate independent degree jobs, in a thread pool when configured; results keep input order"""
    items = list(items)
    workers = max_workers if max_workers is not None else EngineConfig.MAX_WORKERS
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
