"""
Configuration, words and chains of the two-sided bar complex B(A, B, C).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from eqloop.algebra.graded_ring import OVER_K, OVER_R, TARGETS
from eqloop.algebra.presentation import AlgebraPresentation
from eqloop.exceptions import PresentationError

# (degree, index into the degree's basis); the unit is (0, 0)
Factor = Tuple[int, int]
UNIT: Factor = (0, 0)


@dataclass(frozen=True)
class BarConfig:
    """
    Roles of the bar complex: ``left`` (A) and ``right`` (C) are modules over ``middle`` (B)
    through the augmentation-induced structure maps.
    """
    left: AlgebraPresentation
    middle: AlgebraPresentation
    right: AlgebraPresentation
    mode: str = OVER_R
    max_degree: int = 8

    def __post_init__(self):
        if self.mode not in TARGETS:
            raise PresentationError(f"Unknown bar mode {self.mode!r}; expected one of {TARGETS}", invariant="mode")
        if self.max_degree < 0:
            raise PresentationError("max_degree must be non-negative", invariant="truncation")

    @classmethod
    def symmetric(cls, algebra: AlgebraPresentation, mode: str = OVER_R, max_degree: int = 8) -> "BarConfig":
        """The configuration (R, H, R) computing Tor_H(R, R)"""
        r_algebra = algebra.r_subalgebra()
        return cls(left=r_algebra, middle=algebra, right=r_algebra, mode=mode, max_degree=max_degree)

    def with_mode(self, mode: str) -> "BarConfig":
        return BarConfig(self.left, self.middle, self.right, mode, self.max_degree)

    def with_max_degree(self, max_degree: int) -> "BarConfig":
        return BarConfig(self.left, self.middle, self.right, self.mode, max_degree)

    @property
    def label(self) -> str:
        return f"B({self.left.name}, {self.middle.name}, {self.right.name}; {self.mode})"

    @property
    def is_over_r(self) -> bool:
        return self.mode == OVER_R

    @property
    def is_over_k(self) -> bool:
        return self.mode == OVER_K


@dataclass(frozen=True)
class BarWord:
    """
    Basis tensor (a | b₁ | … | b_k | c).

    Slots index the slot basis of the middle algebra (all of B over k, free R-module
    generators of ker ε over R); the outer factors index the bases of A and C.
    """
    left: Factor
    slots: Tuple[Factor, ...]
    right: Factor

    @property
    def length(self) -> int:
        return len(self.slots)

    @property
    def bar_degree(self) -> int:
        return -len(self.slots)

    @property
    def tensor_degree(self) -> int:
        return self.left[0] + sum(s[0] for s in self.slots) + self.right[0]

    @property
    def complex_degree(self) -> int:
        return self.tensor_degree - len(self.slots)

    @property
    def has_unit_slot(self) -> bool:
        return any(s[0] == 0 for s in self.slots)

    def factors(self) -> Tuple[Factor, ...]:
        return (self.left,) + self.slots + (self.right,)

    def sort_key(self) -> tuple:
        outer = self.left[0] + self.right[0]
        return (len(self.slots), -outer, -self.left[0], self.left[1], self.slots, self.right[1])

    @classmethod
    def from_factors(cls, factors: Tuple[Factor, ...]) -> "BarWord":
        return cls(factors[0], tuple(factors[1:-1]), factors[-1])


@dataclass(frozen=True)
class BarChain:
    """Rational combination of words of one complex degree, tagged with its configuration label"""
    degree: int
    terms: Mapping[BarWord, Fraction] = field(default_factory=dict)
    source: str = ""

    def __post_init__(self):
        cleaned = {w: Fraction(c) for w, c in self.terms.items() if c}
        for word in cleaned:
            if word.complex_degree != self.degree:
                raise PresentationError(f"Word of degree {word.complex_degree} in a chain of degree {self.degree}",
                                        invariant="chain-degree")
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def zero(cls, degree: int, source: str = "") -> "BarChain":
        return cls(degree, {}, source)

    @classmethod
    def of(cls, word: BarWord, coefficient=1, source: str = "") -> "BarChain":
        return cls(word.complex_degree, {word: Fraction(coefficient)}, source)

    @classmethod
    def from_terms(cls, degree: int, terms: Iterable[Tuple[BarWord, Fraction]], source: str = "") -> "BarChain":
        collected: Dict[BarWord, Fraction] = {}
        for word, coefficient in terms:
            collected[word] = collected.get(word, Fraction(0)) + coefficient
        return cls(degree, collected, source)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, word: BarWord) -> Fraction:
        return self.terms.get(word, Fraction(0))

    def _merge_source(self, other: "BarChain") -> str:
        if self.source and other.source and self.source != other.source:
            raise PresentationError(f"Chains from {self.source} and {other.source} cannot be combined",
                                    invariant="incompatible-configs")
        return self.source or other.source

    def __add__(self, other: "BarChain") -> "BarChain":
        source = self._merge_source(other)
        if self.is_zero():
            return BarChain(other.degree, other.terms, source)
        if other.is_zero():
            return BarChain(self.degree, self.terms, source)
        if self.degree != other.degree:
            raise PresentationError(f"Cannot add chains of degrees {self.degree} and {other.degree}",
                                    invariant="chain-degree")
        terms = dict(self.terms)
        for word, coefficient in other.terms.items():
            terms[word] = terms.get(word, Fraction(0)) + coefficient
        return BarChain(self.degree, terms, source)

    def __neg__(self) -> "BarChain":
        return self.scale(-1)

    def __sub__(self, other: "BarChain") -> "BarChain":
        return self + (-other)

    def scale(self, factor) -> "BarChain":
        factor = Fraction(factor)
        return BarChain(self.degree, {w: factor * c for w, c in self.terms.items()}, self.source)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BarChain):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.degree, frozenset(self.terms.items())))

    def sorted_terms(self) -> Tuple[Tuple[BarWord, Fraction], ...]:
        return tuple(sorted(self.terms.items(), key=lambda item: item[0].sort_key()))

