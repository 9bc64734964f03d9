"""
Pseudo-dual homotopy groups: cohomology of the indecomposables K/K², K = ker ε.

Over k the kernel is the positive-degree part; over R it is ker(ε: A -> R), treated as an
R-module so that products r·x with r outside K stay indecomposable.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, List

from eqloop.algebra.graded_ring import OVER_K, TARGETS
from eqloop.exceptions import PresentationError
from eqloop.linalg.complexes import slice_cohomology
from eqloop.linalg.rational_matrix import RationalMatrix, SparseVector, Subspace

if TYPE_CHECKING:
    from eqloop.cdga.cdga_engine import CdgaEngine

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomotopyTable:
    target: str
    max_degree: int
    dimensions: Dict[int, int]
    quotient_dimensions: Dict[int, int]
    induced_differential_zero: bool

    def as_list(self) -> List[int]:
        return [self.dimensions.get(n, 0) for n in range(1, self.max_degree + 1)]


class _Indecomposables:
    """Per-degree quotient bases of K/K² with the induced differential"""

    def __init__(self, engine: "CdgaEngine", target: str):
        self.engine = engine
        self.ring = engine.ring
        self.target = target
        self._kernels: Dict[int, Subspace] = {}
        self._squares: Dict[int, Subspace] = {}
        self._quotients: Dict[int, Subspace] = {}

    def kernel(self, n: int) -> Subspace:
        if n not in self._kernels:
            self._kernels[n] = self.ring.augmentation_ideal(n, self.target)
        return self._kernels[n]

    def square(self, n: int) -> Subspace:
        if n not in self._squares:
            products: List[SparseVector] = []
            for i in range(1, n):
                for left in self.ring.augmentation_ideal_basis(i, self.target):
                    for right in self.ring.augmentation_ideal_basis(n - i, self.target):
                        products.append(self.ring.to_vector(self.ring.multiply(left, right)))
            self._squares[n] = Subspace.span(products, self.ring.dimension(n))
        return self._squares[n]

    def quotient(self, n: int) -> Subspace:
        """Representatives of K_n/K²_n: the kernel basis reduced modulo K², re-echeloned"""
        if n not in self._quotients:
            square = self.square(n)
            remainders = [square.reduce(v) for v in self.kernel(n).basis]
            self._quotients[n] = Subspace.span(remainders, self.ring.dimension(n))
        return self._quotients[n]

    def coordinates(self, n: int, vector: SparseVector) -> List[Fraction]:
        remainder = self.square(n).reduce(vector)
        return [remainder.get(p, Fraction(0)) for p in self.quotient(n).pivots]

    def induced_differential(self, n: int) -> RationalMatrix:
        """Matrix Q_n -> Q_{n+1}"""
        columns = []
        for representative in self.quotient(n).basis:
            image = self.ring.differential(self.ring.from_vector(n, representative))
            coordinates = self.coordinates(n + 1, self.ring.to_vector(image))
            columns.append({i: c for i, c in enumerate(coordinates) if c})
        return RationalMatrix.from_columns(columns, self.quotient(n + 1).dim)


def indecomposables_homotopy(engine: "CdgaEngine", target: str = OVER_K) -> HomotopyTable:
    """
    Dimensions of Hⁿ(K/K²) for 1 <= n <= max_degree.

    Raises:
        PresentationError: unknown target
    """
    if target not in TARGETS:
        raise PresentationError(f"Unknown target {target!r}", invariant="target")
    quotient = _Indecomposables(engine, target)
    top = engine.max_degree
    matrices = {n: quotient.induced_differential(n) for n in range(1, top + 1)}
    dimensions: Dict[int, int] = {}
    for n in range(1, top + 1):
        incoming = matrices.get(n - 1)
        dimensions[n] = slice_cohomology(n, quotient.quotient(n).dim, incoming, matrices[n]).betti
    quotient_dimensions = {n: quotient.quotient(n).dim for n in range(1, top + 1)}
    zero = all(m.is_zero() for m in matrices.values())
    logger.info(f"Indecomposables of {engine.ring.name} ({target}): {[dimensions[n] for n in sorted(dimensions)]}")
    return HomotopyTable(target, top, dimensions, quotient_dimensions, zero)


def is_minimal(engine: "CdgaEngine") -> bool:
    """Generators sit in positive degree by construction; minimal means d(K) ⊂ K² over k"""
    quotient = _Indecomposables(engine, OVER_K)
    return all(quotient.induced_differential(n).is_zero() for n in range(1, engine.max_degree))
