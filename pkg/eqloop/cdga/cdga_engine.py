"""
Cohomology of truncated commutative differential graded algebras.
"""

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from eqloop.algebra.graded_ring import OVER_K, GradedRing
from eqloop.algebra.presentation import AlgebraPresentation, GradedElement
from eqloop.cdga import indecomposables, massey
from eqloop.cdga.indecomposables import HomotopyTable
from eqloop.cdga.massey import MasseyResult
from eqloop.exceptions import PresentationError, TruncationError
from eqloop.linalg.complexes import DegreeSlice, SliceCohomology, map_degrees, slice_cohomology
from eqloop.linalg.rational_matrix import RationalMatrix, Subspace, solve_linear

logger = logging.getLogger(__name__)

# (degree, index of the class in that degree)
ClassKey = Tuple[int, int]


@dataclass(frozen=True)
class CdgaInstance:
    presentation: AlgebraPresentation
    max_degree: int

    def __post_init__(self):
        if self.max_degree < 0:
            raise PresentationError(f"max_degree must be non-negative, got {self.max_degree}",
                                    invariant="truncation")


@dataclass
class CohomologyTable:
    """
    Betti numbers, representatives and ring structure of H(A) through ``max_degree``.

    ``ring_constants[(i, j)]`` expresses the product of class i and class j in the
    representative basis of degree ``i[0] + j[0]``.
    """
    max_degree: int
    betti: Dict[int, int]
    chain_dimensions: Dict[int, int]
    representatives: Dict[int, List[GradedElement]] = field(default_factory=dict)
    ring_constants: Dict[Tuple[ClassKey, ClassKey], List[Fraction]] = field(default_factory=dict)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * b for n, b in self.betti.items())

    def chain_euler_characteristic(self) -> int:
        return sum((-1) ** n * d for n, d in self.chain_dimensions.items())

    def poincare_coefficients(self) -> List[int]:
        return [self.betti.get(n, 0) for n in range(self.max_degree + 1)]


class CdgaEngine:
    """
    Differential, cohomology and ring structure of one CDGA, truncated at ``max_degree``.

    The presentation is validated on construction: the augmentation must be well defined and a
    chain map, and d² must vanish on every basis monomial up to the truncation.
    """

    def __init__(self, instance: CdgaInstance, basis_cache=None, ring: Optional[GradedRing] = None):
        self.instance = instance
        self.max_degree = instance.max_degree
        self.ring = ring or GradedRing(instance.presentation, basis_cache)
        self._lock = threading.Lock()
        self._matrices: Dict[int, RationalMatrix] = {}
        self._cohomology: Dict[int, SliceCohomology] = {}
        self.ring.validate_augmentation()
        self.ring.validate_differential(self.max_degree + 1)
        logger.info(f"CDGA {self.ring.name} validated through degree {self.max_degree}")

    def _check_degree(self, degree: int) -> None:
        if degree > self.max_degree:
            raise TruncationError(f"Degree {degree} exceeds truncation {self.max_degree}", degree=degree)

    def differential(self, element: GradedElement) -> GradedElement:
        self._check_degree(element.degree)
        return self.ring.differential(element)

    def differential_matrix(self, n: int) -> RationalMatrix:
        """Matrix of d from degree n to n + 1; columns follow ``degree_basis(n)``"""
        cached = self._matrices.get(n)
        if cached is not None:
            return cached
        basis = self.ring.degree_basis(n)
        columns = [self.ring.to_vector(self.ring.differential(self.ring.monomial_element(m))) for m in basis]
        matrix = RationalMatrix.from_columns(columns, self.ring.dimension(n + 1))
        with self._lock:
            return self._matrices.setdefault(n, matrix)

    def degree_slice(self, n: int) -> DegreeSlice:
        return DegreeSlice(n, tuple(self.ring.degree_basis(n)), self.differential_matrix(n))

    def slice_cohomology(self, n: int) -> SliceCohomology:
        self._check_degree(n)
        cached = self._cohomology.get(n)
        if cached is not None:
            return cached
        incoming = self.differential_matrix(n - 1) if n > 0 else None
        result = slice_cohomology(n, self.ring.dimension(n), incoming, self.differential_matrix(n))
        with self._lock:
            return self._cohomology.setdefault(n, result)

    def representatives(self, n: int) -> List[GradedElement]:
        return [self.ring.from_vector(n, v) for v in self.slice_cohomology(n).representatives]

    def classify(self, element: GradedElement) -> List[Fraction]:
        """Coordinates of the class of a cocycle in the representative basis"""
        return self.slice_cohomology(element.degree).classify(self.ring.to_vector(element))

    def is_cocycle(self, element: GradedElement) -> bool:
        return self.ring.differential(element).is_zero()

    def is_coboundary(self, element: GradedElement) -> bool:
        return self.slice_cohomology(element.degree).is_coboundary(self.ring.to_vector(element))

    def lift(self, element: GradedElement) -> Optional[GradedElement]:
        """A cochain y with d(y) = element, free coordinates set to zero; None when none exists"""
        degree = element.degree - 1
        if degree < 0:
            return None if not element.is_zero() else GradedElement.zero(0)
        solution = solve_linear(self.differential_matrix(degree), self.ring.to_vector(element))
        if solution is None:
            return None
        return self.ring.from_vector(degree, solution)

    def class_element(self, degree: int, coordinates: List[Fraction]) -> GradedElement:
        result = GradedElement.zero(degree)
        for coefficient, representative in zip(coordinates, self.representatives(degree)):
            result = result + representative.scale(coefficient)
        return result

    def cohomology(self, with_ring: bool = True) -> CohomologyTable:
        degrees = list(range(self.max_degree + 1))
        slices = map_degrees(self.slice_cohomology, degrees)
        table = CohomologyTable(
            max_degree=self.max_degree,
            betti={s.degree: s.betti for s in slices},
            chain_dimensions={n: self.ring.dimension(n) for n in degrees},
            representatives={n: self.representatives(n) for n in degrees},
        )
        if with_ring:
            table.ring_constants = self.ring_constants()
        logger.info(f"Cohomology of {self.ring.name}: betti {table.poincare_coefficients()}")
        return table

    def ring_constants(self) -> Dict[Tuple[ClassKey, ClassKey], List[Fraction]]:
        constants: Dict[Tuple[ClassKey, ClassKey], List[Fraction]] = {}
        for p in range(self.max_degree + 1):
            left = self.representatives(p)
            for q in range(self.max_degree + 1 - p):
                right = self.representatives(q)
                for i, a in enumerate(left):
                    for j, b in enumerate(right):
                        constants[((p, i), (q, j))] = self.classify(self.ring.multiply(a, b))
        return constants

    def ring_rank_table(self) -> Dict[Tuple[int, int], int]:
        """Rank of the product Hᵖ ⊗ H^q -> H^{p+q} for p, q >= 1 and p + q within truncation"""
        ranks: Dict[Tuple[int, int], int] = {}
        for p in range(1, self.max_degree + 1):
            left = self.representatives(p)
            for q in range(1, self.max_degree + 1 - p):
                right = self.representatives(q)
                products = [self.classify(self.ring.multiply(a, b)) for a in left for b in right]
                ranks[(p, q)] = Subspace.span(products, self.slice_cohomology(p + q).betti).dim
        return ranks

    def massey_triple(self, a: GradedElement, b: GradedElement, c: GradedElement,
                      lifts: Optional[Tuple[GradedElement, GradedElement]] = None) -> MasseyResult:
        return massey.massey_triple(self, a, b, c, lifts)

    def indecomposables_homotopy(self, target: str = OVER_K) -> HomotopyTable:
        return indecomposables.indecomposables_homotopy(self, target)

    def is_minimal(self) -> bool:
        return indecomposables.is_minimal(self)
