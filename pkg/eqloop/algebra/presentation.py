"""
Presentations of graded-commutative Q-algebras and their elements.

An ``AlgebraPresentation`` is validated on construction: declared names, degrees, homogeneity
of relations and of augmentation/differential values, and the rules tying the distinguished
polynomial subalgebra R to the augmentation. Checks that need per-degree linear algebra
(ε of every relation vanishing, d² = 0) live on ``GradedRing``.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

from eqloop.algebra.monomials import (
    FreePolynomial,
    Monomial,
    generator_monomial,
    polynomial_degree,
    polynomial_to_string,
)
from eqloop.exceptions import PresentationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1


@dataclass(frozen=True)
class AlgebraPresentation:
    """
    Finitely presented graded-commutative algebra over Q.

    Attributes:
        name: Label used in reports
        generators: Ordered generators; the first declared is the largest in the monomial order
        relations: Homogeneous free polynomials generating the ideal
        r_generators: Names of the even generators spanning R
        augmentation: Generator name -> free polynomial in the r-generators (absent = 0, or
            the generator itself for r-generators)
        differential: Generator name -> free polynomial of degree one higher (absent = 0)
    """
    name: str
    generators: Tuple[Generator, ...]
    relations: Tuple[FreePolynomial, ...] = ()
    r_generators: Tuple[str, ...] = ()
    augmentation: Mapping[str, FreePolynomial] = field(default_factory=dict)
    differential: Mapping[str, FreePolynomial] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(dict(r) for r in self.relations))
        object.__setattr__(self, "r_generators", tuple(self.r_generators))
        self._validate()

    # ------------------------------------------------------------------ accessors

    @property
    def generator_names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def generator_degrees(self) -> Tuple[int, ...]:
        return tuple(g.degree for g in self.generators)

    @property
    def has_differential(self) -> bool:
        return any(poly for poly in self.differential.values())

    @property
    def r_indices(self) -> Tuple[int, ...]:
        return tuple(self.index(name) for name in self.r_generators)

    def index(self, name: str) -> int:
        for i, generator in enumerate(self.generators):
            if generator.name == name:
                return i
        raise PresentationError(f"Undeclared generator {name!r}", invariant="declared-names")

    def generator(self, name: str) -> Generator:
        return self.generators[self.index(name)]

    def augmentation_image(self, name: str) -> FreePolynomial:
        """ε(g) as a free polynomial in this presentation's indexing"""
        if name in self.augmentation:
            return dict(self.augmentation[name])
        if name in self.r_generators:
            return {generator_monomial(self.index(name), len(self.generators)): Fraction(1)}
        return {}

    def differential_image(self, name: str) -> FreePolynomial:
        return dict(self.differential.get(name, {}))

    def restrict_to_r(self, monomial: Monomial) -> Monomial:
        """Re-index a monomial supported on r-generators into the indexing of ``r_subalgebra()``"""
        return tuple(monomial[i] for i in self.r_indices)

    def r_subalgebra(self) -> "AlgebraPresentation":
        """The polynomial ring R on the r-generators (k when there are none)"""
        generators = tuple(self.generator(name) for name in self.r_generators)
        return AlgebraPresentation(
            name=f"{self.name}_R",
            generators=generators,
            r_generators=self.r_generators,
        )

    def with_generator_order(self, names: Sequence[str]) -> "AlgebraPresentation":
        """Same algebra with generators re-declared in the given order"""
        if sorted(names) != sorted(self.generator_names):
            raise PresentationError("Reordering must use exactly the declared generators",
                                    invariant="declared-names")
        permutation = [self.index(name) for name in names]

        def reorder(poly: Mapping[Monomial, Fraction]) -> FreePolynomial:
            return {tuple(m[i] for i in permutation): c for m, c in poly.items()}

        return AlgebraPresentation(
            name=self.name,
            generators=tuple(self.generators[i] for i in permutation),
            relations=tuple(reorder(r) for r in self.relations),
            r_generators=self.r_generators,
            augmentation={k: reorder(v) for k, v in self.augmentation.items()},
            differential={k: reorder(v) for k, v in self.differential.items()},
        )

    def describe(self) -> str:
        names = self.generator_names
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        rels = ", ".join(polynomial_to_string(r, names) for r in self.relations)
        return f"{self.name}[{gens}]/({rels})"

    def digest(self) -> str:
        """SHA-256 of a canonical description; keys memoized data such as the basis cache"""
        names = self.generator_names
        lines = [f"algebra {self.name}"]
        lines += [f"generator {g.name} degree {g.degree}" for g in self.generators]
        lines += [f"rbase {name}" for name in self.r_generators]
        lines += [f"relation {polynomial_to_string(r, names)}" for r in self.relations]
        lines += [f"augment {k} -> {polynomial_to_string(v, names)}" for k, v in sorted(self.augmentation.items())]
        lines += [f"differential {k} -> {polynomial_to_string(v, names)}"
                  for k, v in sorted(self.differential.items()) if v]
        return hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()

    # ------------------------------------------------------------------ validation

    def _validate(self) -> None:
        names = self.generator_names
        degrees = self.generator_degrees
        if len(set(names)) != len(names):
            raise PresentationError(f"Duplicate generator names in {self.name}", invariant="declared-names")
        for generator in self.generators:
            if generator.degree < 1:
                raise PresentationError(f"Generator {generator.name} has degree {generator.degree} < 1",
                                        invariant="positive-degree")

        r_set = set(self.r_generators)
        for name in self.r_generators:
            if name not in names:
                raise PresentationError(f"R-generator {name!r} is not declared", invariant="declared-names")
            if self.generator(name).is_odd:
                raise PresentationError(f"R-generator {name} has odd degree", invariant="r-even")
        r_only = [i for i, name in enumerate(names) if name in r_set]

        for relation in self.relations:
            for monomial in relation:
                if len(monomial) != len(names):
                    raise PresentationError("Relation uses an unknown generator", invariant="declared-names")
            polynomial_degree(relation, degrees)
            if relation and all(all(e == 0 for i, e in enumerate(m) if i not in r_only) for m in relation):
                raise PresentationError(
                    f"Relation {polynomial_to_string(relation, names)} lies in R; R must embed freely",
                    invariant="r-free",
                )

        for name, image in self.augmentation.items():
            if name not in names:
                raise PresentationError(f"Augmentation of undeclared generator {name!r}", invariant="declared-names")
            degree = polynomial_degree(image, degrees)
            if degree is not None and degree != self.generator(name).degree:
                raise PresentationError(f"Augmentation of {name} has degree {degree}, expected "
                                        f"{self.generator(name).degree}", invariant="homogeneity")
            for monomial in image:
                if any(e and i not in r_only for i, e in enumerate(monomial)):
                    raise PresentationError(f"Augmentation of {name} leaves R", invariant="augmentation-into-R")
            if name in r_set:
                expected = {generator_monomial(self.index(name), len(names)): Fraction(1)}
                if dict(image) != expected:
                    raise PresentationError(f"Augmentation must fix R-generator {name}",
                                            invariant="augmentation-identity-on-R")

        for name, image in self.differential.items():
            if name not in names:
                raise PresentationError(f"Differential of undeclared generator {name!r}", invariant="declared-names")
            degree = polynomial_degree(image, degrees)
            if degree is not None and degree != self.generator(name).degree + 1:
                raise PresentationError(f"Differential of {name} has degree {degree}, expected "
                                        f"{self.generator(name).degree + 1}", invariant="differential-degree")
            if name in r_set and image:
                raise PresentationError(f"R-generator {name} must be closed", invariant="r-closed")


@dataclass(frozen=True)
class GradedElement:
    """Rational combination of normal-form monomials of one degree"""
    degree: int
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {m: Fraction(c) for m, c in self.terms.items() if c}
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def zero(cls, degree: int) -> "GradedElement":
        return cls(degree, {})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, monomial: Monomial) -> Fraction:
        return self.terms.get(monomial, Fraction(0))

    def _check_degree(self, other: "GradedElement") -> None:
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise PresentationError(f"Cannot add elements of degrees {self.degree} and {other.degree}",
                                    invariant="homogeneity")

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._check_degree(other)
        terms: Dict[Monomial, Fraction] = dict(self.terms)
        for monomial, coefficient in other.terms.items():
            terms[monomial] = terms.get(monomial, Fraction(0)) + coefficient
        degree = self.degree if not self.is_zero() else other.degree
        return GradedElement(degree, terms)

    def __neg__(self) -> "GradedElement":
        return GradedElement(self.degree, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def scale(self, factor) -> "GradedElement":
        factor = Fraction(factor)
        return GradedElement(self.degree, {m: factor * c for m, c in self.terms.items()})

    def __rmul__(self, factor) -> "GradedElement":
        if isinstance(factor, (int, Fraction)):
            return self.scale(factor)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedElement):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.degree, frozenset(self.terms.items())))

    def to_string(self, names: Sequence[str]) -> str:
        return polynomial_to_string(self.terms, names)
