"""
Per-degree arithmetic in a finitely presented graded-commutative algebra.

Every degree is handled on its own: the free monomials of degree n are enumerated, the ideal
slice spanned by {m·r} is row-reduced, and the non-pivot monomials form the normal-form basis.
Results are memoized per ring behind a lock and can be persisted through a basis cache.
"""

import logging
import threading
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple

from eqloop.algebra.expressions import parse_expression
from eqloop.algebra.monomials import (
    FreePolynomial,
    Monomial,
    free_differential,
    free_monomials,
    generator_monomial,
    monomial_degree,
    multiply_monomials,
    polynomial_degree,
    polynomial_to_string,
    substitute,
    unit_monomial,
)
from eqloop.algebra.presentation import AlgebraPresentation, GradedElement
from eqloop.exceptions import HypothesisError, InvariantError, PresentationError
from eqloop.linalg.rational_matrix import (
    RationalMatrix,
    SparseVector,
    Subspace,
    fraction_str,
    kernel_basis,
    solve_linear,
    to_fraction,
)

logger = logging.getLogger(__name__)

OVER_K = "over-k"
OVER_R = "over-R"
TARGETS = (OVER_K, OVER_R)

# (degree of the generator, index into r_module_generators(degree))
ModuleGeneratorKey = Tuple[int, int]


class IdealSlice(NamedTuple):
    degree: int
    free_basis: Tuple[Monomial, ...]
    free_index: Dict[Monomial, int]
    ideal: Subspace
    standard: Tuple[Monomial, ...]
    standard_index: Dict[Monomial, int]


class GradedRing:
    """
    Normal forms, products, augmentation and differential of one presentation.

    Args:
        presentation: The validated presentation
        basis_cache: Optional object with ``load(digest, key)`` / ``store(digest, key, payload)``
    """

    def __init__(self, presentation: AlgebraPresentation, basis_cache=None):
        self.presentation = presentation
        self.names = presentation.generator_names
        self.degrees = presentation.generator_degrees
        self.basis_cache = basis_cache
        self._count = len(self.names)
        self._lock = threading.Lock()
        self._slices: Dict[int, IdealSlice] = {}
        self._augment_memo: Dict[Monomial, FreePolynomial] = {}
        self._differential_memo: Dict[Monomial, GradedElement] = {}
        self._map_memo: Dict[Tuple[int, Monomial], GradedElement] = {}
        self._kernel_memo: Dict[Tuple[int, str], Subspace] = {}
        self._module_generators: Dict[int, List[GradedElement]] = {}
        self._expansion_memo: Dict[int, Tuple[RationalMatrix, List[Tuple[Monomial, ModuleGeneratorKey]]]] = {}
        self._r_ring: Optional["GradedRing"] = None
        self._digest: Optional[str] = None

    @property
    def name(self) -> str:
        return self.presentation.name

    @property
    def digest(self) -> str:
        if self._digest is None:
            self._digest = self.presentation.digest()
        return self._digest

    @property
    def is_polynomial_r(self) -> bool:
        """True when this ring is R itself: every generator spans R and there are no relations"""
        p = self.presentation
        return not p.relations and set(p.r_generators) == set(self.names) and not p.has_differential

    @property
    def r_ring(self) -> "GradedRing":
        if self.is_polynomial_r:
            return self
        if self._r_ring is None:
            self._r_ring = GradedRing(self.presentation.r_subalgebra(), self.basis_cache)
        return self._r_ring

    # ------------------------------------------------------------------ degree bases

    def _slice(self, n: int) -> IdealSlice:
        cached = self._slices.get(n)
        if cached is not None:
            return cached
        computed = self._load_slice(n) or self._build_slice(n)
        with self._lock:
            return self._slices.setdefault(n, computed)

    def _build_slice(self, n: int) -> IdealSlice:
        free_basis = tuple(free_monomials(self.degrees, n))
        free_index = {m: i for i, m in enumerate(free_basis)}
        rows: List[SparseVector] = []
        for relation in self.presentation.relations:
            relation_degree = polynomial_degree(relation, self.degrees)
            if relation_degree is None or relation_degree > n:
                continue
            for multiplier in free_monomials(self.degrees, n - relation_degree):
                row: SparseVector = {}
                for monomial, coefficient in relation.items():
                    sign, product = multiply_monomials(multiplier, monomial, self.degrees)
                    if sign:
                        column = free_index[product]
                        row[column] = row.get(column, Fraction(0)) + sign * coefficient
                rows.append({k: v for k, v in row.items() if v})
        ideal = Subspace.span(rows, len(free_basis))
        pivots = set(ideal.pivots)
        standard = tuple(m for i, m in enumerate(free_basis) if i not in pivots)
        logger.debug(f"{self.name}: degree {n} has {len(free_basis)} free monomials, {len(standard)} standard")
        ideal_slice = IdealSlice(n, free_basis, free_index, ideal, standard,
                                 {m: i for i, m in enumerate(standard)})
        self._store_slice(ideal_slice)
        return ideal_slice

    def _load_slice(self, n: int) -> Optional[IdealSlice]:
        if self.basis_cache is None:
            return None
        payload = self.basis_cache.load(self.digest, f"ring-degree-{n}")
        if not payload:
            return None
        free_basis = tuple(free_monomials(self.degrees, n))
        rows = [{int(col): to_fraction(value) for col, value in row} for row in payload["rows"]]
        ideal = Subspace(len(free_basis), tuple(rows), tuple(payload["pivots"]))
        standard = tuple(tuple(m) for m in payload["standard"])
        return IdealSlice(n, free_basis, {m: i for i, m in enumerate(free_basis)}, ideal, standard,
                          {m: i for i, m in enumerate(standard)})

    def _store_slice(self, ideal_slice: IdealSlice) -> None:
        if self.basis_cache is None:
            return
        payload = {
            "standard": [list(m) for m in ideal_slice.standard],
            "pivots": list(ideal_slice.ideal.pivots),
            "rows": [[[col, fraction_str(v)] for col, v in sorted(row.items())] for row in ideal_slice.ideal.basis],
        }
        self.basis_cache.store(self.digest, f"ring-degree-{ideal_slice.degree}", payload)

    def degree_basis(self, n: int) -> List[Monomial]:
        """Normal-form monomials of degree n, largest first"""
        if n < 0:
            return []
        return list(self._slice(n).standard)

    def dimension(self, n: int) -> int:
        return len(self.degree_basis(n))

    # ------------------------------------------------------------------ elements

    def normal_form(self, poly: FreePolynomial, degree: Optional[int] = None) -> GradedElement:
        found = polynomial_degree(poly, self.degrees)
        if found is None:
            return GradedElement.zero(degree or 0)
        if degree is not None and found != degree:
            raise PresentationError(f"Expected degree {degree}, got {found}", invariant="homogeneity")
        ideal_slice = self._slice(found)
        vector = {ideal_slice.free_index[m]: Fraction(c) for m, c in poly.items() if c}
        remainder = ideal_slice.ideal.reduce(vector)
        return GradedElement(found, {ideal_slice.free_basis[i]: c for i, c in remainder.items()})

    def element(self, text: str) -> GradedElement:
        return self.normal_form(parse_expression(text, self.names, self.degrees))

    def one(self) -> GradedElement:
        return GradedElement(0, {unit_monomial(self._count): Fraction(1)})

    def zero(self, degree: int = 0) -> GradedElement:
        return GradedElement.zero(degree)

    def generator(self, name: str) -> GradedElement:
        index = self.presentation.index(name)
        return self.normal_form({generator_monomial(index, self._count): Fraction(1)})

    def monomial_element(self, monomial: Monomial) -> GradedElement:
        return self.normal_form({monomial: Fraction(1)})

    def is_normal(self, element: GradedElement) -> bool:
        if element.is_zero():
            return True
        standard = self._slice(element.degree).standard_index
        return all(m in standard for m in element.terms)

    def _require_normal(self, element: GradedElement) -> None:
        if not self.is_normal(element):
            raise PresentationError(f"Element is not in normal form for {self.name}", invariant="normal-form")

    def to_vector(self, element: GradedElement) -> SparseVector:
        self._require_normal(element)
        if element.is_zero():
            return {}
        index = self._slice(element.degree).standard_index
        return {index[m]: c for m, c in element.terms.items()}

    def from_vector(self, degree: int, vector: SparseVector) -> GradedElement:
        standard = self._slice(degree).standard
        return GradedElement(degree, {standard[i]: c for i, c in vector.items()})

    def to_string(self, element: GradedElement) -> str:
        return polynomial_to_string(element.terms, self.names)

    def multiply(self, left: GradedElement, right: GradedElement) -> GradedElement:
        self._require_normal(left)
        self._require_normal(right)
        degree = left.degree + right.degree
        if left.is_zero() or right.is_zero():
            return GradedElement.zero(degree)
        product: FreePolynomial = {}
        for m1, c1 in left.terms.items():
            for m2, c2 in right.terms.items():
                sign, monomial = multiply_monomials(m1, m2, self.degrees)
                if sign:
                    product[monomial] = product.get(monomial, Fraction(0)) + sign * c1 * c2
        return self.normal_form({m: c for m, c in product.items() if c}, degree)

    # ------------------------------------------------------------------ augmentation

    def _augment_monomial(self, monomial: Monomial) -> FreePolynomial:
        cached = self._augment_memo.get(monomial)
        if cached is not None:
            return cached
        images = [self.presentation.augmentation_image(name) for name in self.names]
        own = substitute({monomial: Fraction(1)}, images, self.degrees)
        value = {self.presentation.restrict_to_r(m): c for m, c in own.items()}
        with self._lock:
            self._augment_memo[monomial] = value
        return value

    def augment(self, element: GradedElement) -> GradedElement:
        """ε: this ring -> R, applied multiplicatively and linearly"""
        self._require_normal(element)
        r_ring = self.r_ring
        if r_ring is self:
            return element
        total: FreePolynomial = {}
        for monomial, coefficient in element.terms.items():
            for r_monomial, value in self._augment_monomial(monomial).items():
                total[r_monomial] = total.get(r_monomial, Fraction(0)) + coefficient * value
        return r_ring.normal_form({m: c for m, c in total.items() if c}, element.degree)

    def augment_to_k(self, element: GradedElement) -> Fraction:
        """ε followed by R -> k"""
        if element.degree != 0 or element.is_zero():
            return Fraction(0)
        return element.coefficient(unit_monomial(self._count))

    def validate_augmentation(self) -> None:
        """ε must kill every relation, otherwise it is not defined on the quotient"""
        names = self.names
        images = [self.presentation.augmentation_image(name) for name in names]
        for relation in self.presentation.relations:
            image = substitute(relation, images, self.degrees)
            if image:
                raise PresentationError(
                    f"Augmentation does not vanish on relation {polynomial_to_string(relation, names)} "
                    f"(image {polynomial_to_string(image, names)})",
                    invariant="augmentation-well-defined",
                )

    def map_into(self, target: "GradedRing", element: GradedElement) -> GradedElement:
        """
        Structure map to ``target``: ε into R, then R into ``target`` through same-named generators.

        R-generators absent from ``target`` map to zero.
        """
        self._require_normal(element)
        if element.is_zero():
            return GradedElement.zero(element.degree)
        result = GradedElement.zero(element.degree)
        for monomial, coefficient in element.terms.items():
            key = (id(target), monomial)
            image = self._map_memo.get(key)
            if image is None:
                image = self._map_monomial(target, monomial)
                with self._lock:
                    self._map_memo[key] = image
            result = result + image.scale(coefficient)
        return result

    def _map_monomial(self, target: "GradedRing", monomial: Monomial) -> GradedElement:
        degree = monomial_degree(monomial, self.degrees)
        images = []
        for name in self.presentation.r_generators:
            if name in target.names:
                images.append({generator_monomial(target.names.index(name), len(target.names)): Fraction(1)})
            else:
                images.append({})
        lifted = substitute(self._augment_monomial(monomial), images, target.degrees)
        if not lifted:
            return GradedElement.zero(degree)
        return target.normal_form(lifted, degree)

    def lift_from_r(self, r_monomial: Monomial) -> Monomial:
        """An R-monomial written in this ring's indexing"""
        exponents = [0] * self._count
        for position, index in enumerate(self.presentation.r_indices):
            exponents[index] = r_monomial[position]
        return tuple(exponents)

    def augmentation_matrix(self, n: int, target: str = OVER_R) -> RationalMatrix:
        """Matrix of ε in degree n; columns follow ``degree_basis(n)``"""
        if target not in TARGETS:
            raise PresentationError(f"Unknown target {target!r}", invariant="target")
        basis = self.degree_basis(n)
        if target == OVER_K:
            rows = 1 if n == 0 else 0
            entries = {(0, j): Fraction(1) for j, m in enumerate(basis) if n == 0}
            return RationalMatrix(rows, len(basis), entries)
        r_ring = self.r_ring
        columns = [r_ring.to_vector(self.augment(self.monomial_element(m))) for m in basis]
        return RationalMatrix.from_columns(columns, r_ring.dimension(n))

    def augmentation_ideal(self, n: int, target: str = OVER_R) -> Subspace:
        key = (n, target)
        cached = self._kernel_memo.get(key)
        if cached is not None:
            return cached
        if n <= 0:
            subspace = Subspace.zero(self.dimension(max(n, 0)))
        else:
            subspace = kernel_basis(self.augmentation_matrix(n, target))
        with self._lock:
            return self._kernel_memo.setdefault(key, subspace)

    def augmentation_ideal_basis(self, n: int, target: str = OVER_R) -> List[GradedElement]:
        """Deterministic basis of the degree-n piece of ker ε (into R or into k)"""
        return [self.from_vector(n, v) for v in self.augmentation_ideal(n, target).basis]

    # ------------------------------------------------------------------ R-module structure

    def r_multiply(self, r_monomial: Monomial, element: GradedElement) -> GradedElement:
        r_element = self.monomial_element(self.lift_from_r(r_monomial))
        return self.multiply(r_element, element)

    def r_module_generators(self, n: int) -> List[GradedElement]:
        """Generators of ker(ε: H -> R) in degree n modulo R⁺·ker ε"""
        cached = self._module_generators.get(n)
        if cached is not None:
            return cached
        kernel = self.augmentation_ideal(n, OVER_R)
        decomposables: List[SparseVector] = []
        for r_name in self.presentation.r_generators:
            r_degree = self.presentation.generator(r_name).degree
            lower = n - r_degree
            if lower < 1:
                continue
            r_element = self.generator(r_name)
            for vector in self.augmentation_ideal(lower, OVER_R).basis:
                product = self.multiply(r_element, self.from_vector(lower, vector))
                decomposables.append(self.to_vector(product))
        decomposable_space = Subspace.span(decomposables, self.dimension(n))
        remainders = [decomposable_space.reduce(v) for v in kernel.basis]
        generators = [self.from_vector(n, v) for v in Subspace.span(remainders, self.dimension(n)).basis]
        with self._lock:
            return self._module_generators.setdefault(n, generators)

    def _expansion_system(self, n: int) -> Tuple[RationalMatrix, List[Tuple[Monomial, ModuleGeneratorKey]]]:
        cached = self._expansion_memo.get(n)
        if cached is not None:
            return cached
        r_ring = self.r_ring
        keys: List[Tuple[Monomial, ModuleGeneratorKey]] = []
        columns: List[SparseVector] = []
        for generator_degree in range(1, n + 1):
            for index, generator in enumerate(self.r_module_generators(generator_degree)):
                for r_monomial in r_ring.degree_basis(n - generator_degree):
                    keys.append((r_monomial, (generator_degree, index)))
                    columns.append(self.to_vector(self.r_multiply(r_monomial, generator)))
        system = (RationalMatrix.from_columns(columns, self.dimension(n)), keys)
        with self._lock:
            return self._expansion_memo.setdefault(n, system)

    def check_r_free(self, max_degree: int) -> None:
        """
        ker(ε: H -> R) must be a free R-module through ``max_degree``.

        Raises:
            HypothesisError: naming the first degree where the count of free generators fails
        """
        for n in range(1, max_degree + 1):
            matrix, keys = self._expansion_system(n)
            kernel_dim = self.augmentation_ideal(n, OVER_R).dim
            rank = matrix.rank() if keys else 0
            if rank != len(keys) or rank != kernel_dim:
                raise HypothesisError(
                    f"ker ε of {self.name} is not a free R-module in degree {n} "
                    f"(dimension {kernel_dim}, {len(keys)} free words of rank {rank})",
                    invariant="r-free-kernel",
                )

    def expand_over_r(self, element: GradedElement) -> List[Tuple[Monomial, ModuleGeneratorKey, Fraction]]:
        """
        Write an element of ker ε as Σ r_i·e_i over the free R-module generators.

        Returns:
            (R-monomial, generator key, coefficient) triples in a deterministic order
        """
        if element.is_zero():
            return []
        matrix, keys = self._expansion_system(element.degree)
        solution = solve_linear(matrix, self.to_vector(element))
        if solution is None:
            raise HypothesisError(f"Element {self.to_string(element)} is not in the free R-span of ker ε",
                                  invariant="r-free-kernel")
        return [(keys[i][0], keys[i][1], solution[i]) for i in sorted(solution)]

    # ------------------------------------------------------------------ differential

    def differential(self, element: GradedElement) -> GradedElement:
        """Leibniz extension of the generator values, reduced to normal form"""
        self._require_normal(element)
        result = GradedElement.zero(element.degree + 1)
        if not self.presentation.has_differential:
            return result
        for monomial, coefficient in element.terms.items():
            image = self._differential_memo.get(monomial)
            if image is None:
                images = [self.presentation.differential_image(name) for name in self.names]
                image = self.normal_form(free_differential({monomial: Fraction(1)}, images, self.degrees),
                                         element.degree + 1)
                with self._lock:
                    self._differential_memo[monomial] = image
            result = result + image.scale(coefficient)
        return result

    def validate_differential(self, max_degree: int) -> None:
        """
        Check that d is well defined on the quotient, that ε∘d = 0 and that d² = 0 through ``max_degree``.

        Raises:
            PresentationError: d does not preserve the ideal or ε is not a chain map
            InvariantError: d² fails on a basis monomial
        """
        if not self.presentation.has_differential:
            return
        images = [self.presentation.differential_image(name) for name in self.names]
        for relation in self.presentation.relations:
            degree = polynomial_degree(relation, self.degrees)
            if degree is None:
                continue
            image = self.normal_form(free_differential(relation, images, self.degrees), degree + 1)
            if not image.is_zero():
                raise PresentationError(
                    f"Differential does not preserve relation {polynomial_to_string(relation, self.names)}",
                    invariant="differential-well-defined",
                )
        for name in self.names:
            d_image = self.differential(self.generator(name))
            if not self.augment(d_image).is_zero():
                raise PresentationError(f"Augmentation is not a chain map on {name}", invariant="augmentation-chain-map")
        for n in range(0, max_degree):
            for monomial in self.degree_basis(n):
                twice = self.differential(self.differential(self.monomial_element(monomial)))
                if not twice.is_zero():
                    raise InvariantError(f"d² is nonzero on {polynomial_to_string({monomial: 1}, self.names)}",
                                         degree=n)

    def describe_basis(self, n: int) -> List[str]:
        return [polynomial_to_string({m: Fraction(1)}, self.names) for m in self.degree_basis(n)]

