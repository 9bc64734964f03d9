"""
Exact rational linear algebra.

Matrices and vectors are sparse: vectors are ``{index: Fraction}`` dictionaries and matrices
keep a ``{(row, col): Fraction}`` map with no stored zeros. Row reduction is delegated to
sympy's ``DomainMatrix`` over ``QQ`` (sparse ``SDM`` storage, dense below a size threshold),
so no floating point ever enters a rank or a kernel.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from eqloop.config.settings import EngineConfig
from eqloop.exceptions import DimensionMismatchError

logger = logging.getLogger(__name__)

SparseVector = Dict[int, Fraction]
VectorLike = Union[Mapping[int, object], Sequence[object]]


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, ``"p/q"`` strings and sympy rationals to a Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    numerator = getattr(value, "numerator", None)
    denominator = getattr(value, "denominator", None)
    if numerator is not None and denominator is not None:
        # sympy QQ elements (PythonMPQ / gmpy mpq) expose these as attributes
        return Fraction(int(numerator), int(denominator))
    raise TypeError(f"Cannot interpret {value!r} as an exact rational")


def fraction_str(value: Fraction) -> str:
    """Render a rational as ``"p/q"`` (or ``"p"`` when integral)"""
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def sparse_vector(values: VectorLike, dim: Optional[int] = None) -> SparseVector:
    """Normalize a dense sequence or a mapping into a sparse vector without zeros"""
    if isinstance(values, Mapping):
        items = values.items()
    else:
        if dim is not None and len(values) != dim:
            raise DimensionMismatchError(f"Vector of length {len(values)} where {dim} was expected")
        items = enumerate(values)
    result: SparseVector = {}
    for index, value in items:
        if dim is not None and not 0 <= index < dim:
            raise DimensionMismatchError(f"Index {index} outside ambient dimension {dim}")
        value = to_fraction(value)
        if value:
            result[index] = value
    return result


def dense_vector(vector: Mapping[int, Fraction], dim: int) -> List[Fraction]:
    return [vector.get(i, Fraction(0)) for i in range(dim)]


def add_scaled(target: SparseVector, vector: Mapping[int, Fraction], scale: Fraction = Fraction(1)) -> SparseVector:
    """In-place ``target += scale * vector``; zero entries are removed"""
    if not scale:
        return target
    for index, value in vector.items():
        new_value = target.get(index, Fraction(0)) + scale * value
        if new_value:
            target[index] = new_value
        else:
            target.pop(index, None)
    return target


class RationalMatrix:
    """Sparse exact rational matrix; treat instances as immutable"""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[Mapping[Tuple[int, int], object]] = None):
        if rows < 0 or cols < 0:
            raise DimensionMismatchError(f"Invalid shape ({rows}, {cols})")
        self.rows = rows
        self.cols = cols
        cleaned: Dict[Tuple[int, int], Fraction] = {}
        for (i, j), value in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionMismatchError(f"Entry ({i}, {j}) outside shape ({rows}, {cols})")
            value = to_fraction(value)
            if value:
                cleaned[(i, j)] = value
        self.entries = cleaned

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], cols: Optional[int] = None) -> "RationalMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise DimensionMismatchError(f"Row {i} has length {len(row)}, expected {cols}")
            for j, value in enumerate(row):
                entries[(i, j)] = value
        return cls(rows, cols, entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Mapping[int, object]], cols: int) -> "RationalMatrix":
        entries = {}
        for i, row in enumerate(rows):
            for j, value in row.items():
                entries[(i, j)] = value
        return cls(len(rows), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Mapping[int, object]], rows: int) -> "RationalMatrix":
        """Column ``j`` is the image of the ``j``-th basis vector"""
        entries = {}
        for j, column in enumerate(columns):
            for i, value in column.items():
                entries[(i, j)] = value
        return cls(rows, len(columns), entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not self.entries

    def row_vectors(self) -> List[SparseVector]:
        rows: List[SparseVector] = [dict() for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            rows[i][j] = value
        return rows

    def column_vectors(self) -> List[SparseVector]:
        columns: List[SparseVector] = [dict() for _ in range(self.cols)]
        for (i, j), value in self.entries.items():
            columns[j][i] = value
        return columns

    def to_dense(self) -> List[List[Fraction]]:
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            dense[i][j] = value
        return dense

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def apply(self, vector: VectorLike) -> SparseVector:
        """Matrix-vector product ``self · vector``"""
        vector = sparse_vector(vector, self.cols)
        result: SparseVector = {}
        for (i, j), value in self.entries.items():
            x = vector.get(j)
            if x:
                result[i] = result.get(i, Fraction(0)) + value * x
        return {i: v for i, v in result.items() if v}

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"Cannot multiply {self.shape} by {other.shape}")
        by_row: Dict[int, List[Tuple[int, Fraction]]] = {}
        for (k, j), value in other.entries.items():
            by_row.setdefault(k, []).append((j, value))
        entries: Dict[Tuple[int, int], Fraction] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                entries[(i, j)] = entries.get((i, j), Fraction(0)) + a * b
        return RationalMatrix(self.rows, other.cols, entries)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError(f"Cannot add {self.shape} and {other.shape}")
        entries = dict(self.entries)
        for key, value in other.entries.items():
            entries[key] = entries.get(key, Fraction(0)) + value
        return RationalMatrix(self.rows, self.cols, entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def to_domain_matrix(self) -> DomainMatrix:
        rows: Dict[int, Dict[int, object]] = {}
        for (i, j), value in self.entries.items():
            rows.setdefault(i, {})[j] = QQ(value.numerator, value.denominator)
        matrix = DomainMatrix(rows, (self.rows, self.cols), QQ)
        if self.rows * self.cols < EngineConfig.DENSE_THRESHOLD:
            matrix = matrix.to_dense()
        return matrix

    def rank(self) -> int:
        return len(rref(self)[1])


def rref(m: RationalMatrix) -> Tuple[RationalMatrix, List[int]]:
    """
    Reduced row-echelon form with leftmost-first pivoting.

    Returns:
        The unique reduced matrix (same shape, zero rows last) and its pivot columns
    """
    if not m.entries:
        return RationalMatrix(m.rows, m.cols), []
    reduced, pivots = m.to_domain_matrix().rref()
    entries = {}
    for i, row in reduced.to_sparse().rep.items():
        for j, value in row.items():
            entries[(i, j)] = to_fraction(value)
    return RationalMatrix(m.rows, m.cols, entries), list(pivots)


@dataclass(frozen=True)
class Subspace:
    """
    A subspace of ``Q^ambient_dim`` held by its reduced row-echelon basis.

    ``basis[i]`` has a 1 at ``pivots[i]`` and zeros at every other pivot, so two subspaces
    are equal exactly when their bases are.
    """
    ambient_dim: int
    basis: Tuple[SparseVector, ...]
    pivots: Tuple[int, ...]

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, (), ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple({i: Fraction(1)} for i in range(ambient_dim)), tuple(range(ambient_dim)))

    @classmethod
    def span(cls, vectors: Iterable[VectorLike], ambient_dim: int) -> "Subspace":
        rows = [sparse_vector(v, ambient_dim) for v in vectors]
        rows = [row for row in rows if row]
        if not rows:
            return cls.zero(ambient_dim)
        reduced, pivots = rref(RationalMatrix.from_rows(rows, ambient_dim))
        basis = tuple(reduced.row_vectors()[:len(pivots)])
        return cls(ambient_dim, basis, tuple(pivots))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, vector: VectorLike) -> SparseVector:
        """Remainder of ``vector`` modulo this subspace; it vanishes at every pivot"""
        vector = sparse_vector(vector, self.ambient_dim)
        remainder = dict(vector)
        for row, pivot in zip(self.basis, self.pivots):
            coefficient = vector.get(pivot)
            if coefficient:
                add_scaled(remainder, row, -coefficient)
        return remainder

    def contains(self, vector: VectorLike) -> bool:
        return not self.reduce(vector)

    def coordinates(self, vector: VectorLike) -> Optional[List[Fraction]]:
        return solve_modulo(vector, self)

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError("Subspaces live in different ambient spaces")
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient_dim)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def dense_basis(self) -> List[List[Fraction]]:
        return [dense_vector(v, self.ambient_dim) for v in self.basis]


def kernel_basis(m: RationalMatrix) -> Subspace:
    """Canonical basis of ``{v : m·v = 0}``; its dimension is ``cols - rank(m)``"""
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    rows = reduced.row_vectors()
    vectors = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vector = {free: Fraction(1)}
        for row, pivot in zip(rows, pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        vectors.append(vector)
    return Subspace.span(vectors, m.cols)


def image_basis(m: RationalMatrix) -> Subspace:
    """Column space of ``m`` inside ``Q^rows``"""
    return Subspace.span(m.column_vectors(), m.rows)


def solve_modulo(vector: VectorLike, span: Subspace) -> Optional[List[Fraction]]:
    """
    Express ``vector`` in the canonical basis of ``span``.

    Returns:
        The coefficient list, or None when ``vector`` is not in the span
    Raises:
        DimensionMismatchError: if the vector does not live in ``span``'s ambient space
    """
    vector = sparse_vector(vector, span.ambient_dim)
    coefficients = [vector.get(pivot, Fraction(0)) for pivot in span.pivots]
    reconstruction: SparseVector = {}
    for coefficient, row in zip(coefficients, span.basis):
        add_scaled(reconstruction, row, coefficient)
    if reconstruction != vector:
        return None
    return coefficients


def solve_linear(m: RationalMatrix, target: VectorLike) -> Optional[SparseVector]:
    """
    A particular solution of ``m·x = target`` with every free variable set to zero.

    Returns:
        The solution as a sparse vector, or None when the system is inconsistent
    """
    target = sparse_vector(target, m.rows)
    if not target:
        return {}
    entries = dict(m.entries)
    for i, value in target.items():
        entries[(i, m.cols)] = value
    reduced, pivots = rref(RationalMatrix(m.rows, m.cols + 1, entries))
    if pivots and pivots[-1] == m.cols:
        return None
    rows = reduced.row_vectors()
    solution: SparseVector = {}
    for row, pivot in zip(rows, pivots):
        value = row.get(m.cols)
        if value:
            solution[pivot] = value
    return solution
