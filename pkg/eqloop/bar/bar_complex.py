"""
The normalized two-sided bar complex B̄(A, B, C) under truncation.

Sign table (ε_i = |a| + Σ_{j<=i} (|b_j| - 1), k = number of slots):

    d(a|b₁|…|b_k|c) = (da|…|c) + Σ_i (-1)^{ε_{i-1}+1} (a|…|db_i|…|c) + (-1)^{ε_k} (a|…|dc)
    δ(a|b₁|…|b_k|c) = -[ (-1)^{ε_0} (a·φ_A(b₁)|b₂|…|c)
                         + Σ_{i=1}^{k-1} (-1)^{ε_i} (a|…|b_i b_{i+1}|…|c)
                         + (-1)^{ε_{k-1}+1} (a|…|b_{k-1}|φ_C(b_k)·c) ]

φ_A, φ_C are the structure maps B -> A, C induced by the augmentation. Over k the slots run
over a monomial basis of B⁺; over R they run over free R-module generators of ker(ε: B -> R),
and R-coefficients produced by merges or differentials move into the left factor.
"""

import logging
import threading
from collections import Counter
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from eqloop.algebra.graded_ring import GradedRing
from eqloop.algebra.monomials import Monomial, polynomial_to_string
from eqloop.algebra.presentation import GradedElement
from eqloop.bar.bar_config import UNIT, BarChain, BarConfig, BarWord, Factor
from eqloop.exceptions import HypothesisError, PresentationError, TruncationError
from eqloop.linalg.complexes import SliceCohomology, map_degrees, slice_cohomology
from eqloop.linalg.rational_matrix import RationalMatrix, kernel_basis

logger = logging.getLogger(__name__)

WordTerms = Dict[BarWord, Fraction]
# an R-monomial to absorb into the left factor (None over k), a slot factor, a coefficient
SlotExpansion = List[Tuple[Optional[Monomial], Factor, Fraction]]

DIFFERENTIALS = ("d", "delta", "D")


def _add_term(terms: WordTerms, word: BarWord, coefficient: Fraction) -> None:
    value = terms.get(word, Fraction(0)) + coefficient
    if value:
        terms[word] = value
    else:
        terms.pop(word, None)


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered ways to write ``total`` as a sum of ``parts`` integers >= 1"""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


class BarComplex:
    """
    Basis, differentials and cohomology of one bar configuration.

    Args:
        config: Roles, mode and truncation
        basis_cache: Optional basis cache handed to the underlying rings
    """

    def __init__(self, config: BarConfig, basis_cache=None):
        self.config = config
        self.mode = config.mode
        self.max_degree = config.max_degree
        self.source = config.label
        self.middle = GradedRing(config.middle, basis_cache)
        self.left = GradedRing(config.left, basis_cache)
        self.right = self.left if config.right is config.left else GradedRing(config.right, basis_cache)
        self._lock = threading.Lock()
        self._bases: Dict[int, List[BarWord]] = {}
        self._indices: Dict[int, Dict[BarWord, int]] = {}
        self._slot_bases: Dict[int, List[GradedElement]] = {}
        self._expansions: Dict[Tuple[int, Tuple[Monomial, ...]], SlotExpansion] = {}
        self._merges: Dict[Tuple[Factor, Factor], SlotExpansion] = {}
        self._matrices: Dict[Tuple[int, str], RationalMatrix] = {}
        self._cohomology: Dict[int, SliceCohomology] = {}
        self.stats = {"slices_built": 0, "words": 0, "matrices_built": 0}
        if config.is_over_r:
            self._check_over_r()

    # ------------------------------------------------------------------ hypotheses

    def _check_over_r(self) -> None:
        r_names = self.config.middle.r_generators
        for ring in (self.left, self.right):
            if not ring.is_polynomial_r or ring.names != r_names:
                raise HypothesisError(
                    f"Over-R mode needs both outer factors to be R = k[{', '.join(r_names)}], got {ring.name}",
                    invariant="outer-factors-R",
                )
        self.middle.check_r_free(self.max_degree + 2)
        self.check_non_zero_divisors()

    def check_non_zero_divisors(self) -> None:
        """Each r-generator must act injectively on A or on C through the truncation"""
        for r_name in self.config.middle.r_generators:
            r_middle = self.middle.generator(r_name)
            injective_somewhere = False
            for ring in (self.left, self.right):
                r_outer = self.middle.map_into(ring, r_middle)
                if r_outer.is_zero():
                    continue
                if all(self._multiplication_injective(ring, r_outer, n) for n in range(self.max_degree + 1)):
                    injective_somewhere = True
                    break
            if not injective_somewhere:
                raise HypothesisError(f"R-generator {r_name} is a zero divisor in both outer factors",
                                      invariant="non-zero-divisor")

    @staticmethod
    def _multiplication_injective(ring: GradedRing, element: GradedElement, n: int) -> bool:
        basis = ring.degree_basis(n)
        if not basis:
            return True
        columns = [ring.to_vector(ring.multiply(element, ring.monomial_element(m))) for m in basis]
        matrix = RationalMatrix.from_columns(columns, ring.dimension(n + element.degree))
        return kernel_basis(matrix).dim == 0

    def _check_simple_connectivity(self) -> None:
        if self.slot_basis(1):
            raise HypothesisError(
                f"{self.middle.name} has slot content in degree 1; the bar complex needs slots of degree >= 2",
                invariant="simple-connectivity",
            )

    # ------------------------------------------------------------------ factor bases

    def slot_basis(self, degree: int) -> List[GradedElement]:
        """Elements of B indexed by slot factors of the given degree (degree 0 is the unit)"""
        cached = self._slot_bases.get(degree)
        if cached is not None:
            return cached
        if degree == 0:
            basis = [self.middle.one()]
        elif degree < 0:
            basis = []
        elif self.config.is_over_r:
            basis = self.middle.r_module_generators(degree)
        else:
            basis = [self.middle.monomial_element(m) for m in self.middle.degree_basis(degree)]
        with self._lock:
            return self._slot_bases.setdefault(degree, basis)

    def slot_element(self, factor: Factor) -> GradedElement:
        return self.slot_basis(factor[0])[factor[1]]

    def left_element(self, factor: Factor) -> GradedElement:
        return self.left.monomial_element(self.left.degree_basis(factor[0])[factor[1]])

    def right_element(self, factor: Factor) -> GradedElement:
        return self.right.monomial_element(self.right.degree_basis(factor[0])[factor[1]])

    def expand_slot(self, element: GradedElement) -> SlotExpansion:
        """Write an element of B in slot factors; over R the R-coefficients are returned separately"""
        if element.is_zero():
            return []
        key = (element.degree, tuple(sorted(element.terms.items())))
        cached = self._expansions.get(key)
        if cached is not None:
            return cached
        if element.degree == 0:
            expansion = [(None, UNIT, element.coefficient(tuple([0] * len(self.middle.names))))]
        elif self.config.is_over_r:
            expansion = [(r_monomial, generator, coefficient)
                         for r_monomial, generator, coefficient in self.middle.expand_over_r(element)]
        else:
            expansion = [(None, (element.degree, i), c) for i, c in sorted(self.middle.to_vector(element).items())]
        with self._lock:
            self._expansions[key] = expansion
        return expansion

    def absorb(self, left: Factor, r_monomial: Optional[Monomial]) -> Factor:
        """Multiply an R-monomial into the left factor (over R the left factor is an R-monomial)"""
        if r_monomial is None or not any(r_monomial):
            return left
        product = self.left.multiply(self.left_element(left), self.left.monomial_element(r_monomial))
        ((index, _),) = self.left.to_vector(product).items()
        return (product.degree, index)

    def _outer_terms(self, ring: GradedRing, element: GradedElement) -> List[Tuple[Factor, Fraction]]:
        return [((element.degree, i), c) for i, c in sorted(ring.to_vector(element).items())]

    # ------------------------------------------------------------------ basis enumeration

    def bar_basis(self, n: int) -> List[BarWord]:
        """All words of complex degree n in a deterministic order"""
        if n > self.max_degree + 1:
            raise TruncationError(f"Bar degree slice {n} exceeds truncation {self.max_degree}", degree=n)
        if n < 0:
            return []
        cached = self._bases.get(n)
        if cached is not None:
            return cached
        self._check_simple_connectivity()
        words: List[BarWord] = []
        for k in range(0, n + 1):
            for a in range(0, n - k + 1):
                left_dim = self.left.dimension(a)
                if not left_dim:
                    continue
                right_degrees = [0] if self.config.is_over_r else range(0, n - a - k + 1)
                for c in right_degrees:
                    right_dim = self.right.dimension(c)
                    if not right_dim:
                        continue
                    for suspended in compositions(n - a - c, k):
                        slot_choices = [len(self.slot_basis(s + 1)) for s in suspended]
                        if not all(slot_choices):
                            continue
                        for slots in self._slot_products(suspended, slot_choices):
                            for i in range(left_dim):
                                for j in range(right_dim):
                                    words.append(BarWord((a, i), slots, (c, j)))
        words.sort(key=BarWord.sort_key)
        with self._lock:
            self._bases.setdefault(n, words)
            self._indices.setdefault(n, {w: i for i, w in enumerate(words)})
            self.stats["slices_built"] += 1
            self.stats["words"] += len(words)
        logger.debug(f"{self.source}: degree {n} has {len(words)} words")
        return self._bases[n]

    @staticmethod
    def _slot_products(suspended: Tuple[int, ...], choices: List[int]) -> Iterator[Tuple[Factor, ...]]:
        if not suspended:
            yield ()
            return
        for index in range(choices[0]):
            for rest in BarComplex._slot_products(suspended[1:], choices[1:]):
                yield ((suspended[0] + 1, index),) + rest

    def word_index(self, word: BarWord) -> int:
        self.bar_basis(word.complex_degree)
        return self._indices[word.complex_degree][word]

    def bigraded_dimensions(self, n: int) -> Dict[Tuple[int, int], int]:
        """Counts of words of complex degree n by (bar degree, tensor degree)"""
        return dict(Counter((w.bar_degree, w.tensor_degree) for w in self.bar_basis(n)))

    # ------------------------------------------------------------------ differentials on words

    @staticmethod
    def epsilons(word: BarWord) -> List[int]:
        """ε_0 … ε_k of a word"""
        values = [word.left[0]]
        for slot in word.slots:
            values.append(values[-1] + slot[0] - 1)
        return values

    def _replace_slot(self, word: BarWord, position: int, element: GradedElement,
                      coefficient: Fraction, terms: WordTerms) -> None:
        for r_monomial, factor, c in self.expand_slot(element):
            slots = word.slots[:position] + (factor,) + word.slots[position + 1:]
            _add_term(terms, BarWord(self.absorb(word.left, r_monomial), slots, word.right), coefficient * c)

    def word_d(self, word: BarWord) -> WordTerms:
        terms: WordTerms = {}
        eps = self.epsilons(word)
        if self.left.presentation.has_differential:
            image = self.left.differential(self.left_element(word.left))
            for factor, c in self._outer_terms(self.left, image):
                _add_term(terms, BarWord(factor, word.slots, word.right), c)
        if self.middle.presentation.has_differential:
            for i, slot in enumerate(word.slots):
                image = self.middle.differential(self.slot_element(slot))
                if image.is_zero():
                    continue
                sign = Fraction(-1 if (eps[i] + 1) % 2 else 1)
                self._replace_slot(word, i, image, sign, terms)
        if self.right.presentation.has_differential:
            image = self.right.differential(self.right_element(word.right))
            sign = Fraction(-1 if eps[-1] % 2 else 1)
            for factor, c in self._outer_terms(self.right, image):
                _add_term(terms, BarWord(word.left, word.slots, factor), sign * c)
        return terms

    def merge(self, first: Factor, second: Factor) -> SlotExpansion:
        key = (first, second)
        cached = self._merges.get(key)
        if cached is not None:
            return cached
        product = self.middle.multiply(self.slot_element(first), self.slot_element(second))
        expansion = self.expand_slot(product)
        with self._lock:
            self._merges[key] = expansion
        return expansion

    def merge_terms(self, word: BarWord, j: int) -> List[Tuple[BarWord, Fraction]]:
        """The j-th merge of δ with its sign: j = 0 is left·b₁, j = k is b_k·right"""
        k = word.length
        eps = self.epsilons(word)
        result: List[Tuple[BarWord, Fraction]] = []
        if j == 0:
            sign = Fraction(-1 if eps[0] % 2 else 1) * -1
            image = self.middle.map_into(self.left, self.slot_element(word.slots[0]))
            product = self.left.multiply(self.left_element(word.left), image)
            for factor, c in self._outer_terms(self.left, product):
                result.append((BarWord(factor, word.slots[1:], word.right), sign * c))
        elif j == k:
            sign = Fraction(-1 if (eps[k - 1] + 1) % 2 else 1) * -1
            image = self.middle.map_into(self.right, self.slot_element(word.slots[-1]))
            product = self.right.multiply(image, self.right_element(word.right))
            for factor, c in self._outer_terms(self.right, product):
                result.append((BarWord(word.left, word.slots[:-1], factor), sign * c))
        else:
            sign = Fraction(-1 if eps[j] % 2 else 1) * -1
            for r_monomial, factor, c in self.merge(word.slots[j - 1], word.slots[j]):
                slots = word.slots[:j - 1] + (factor,) + word.slots[j + 1:]
                result.append((BarWord(self.absorb(word.left, r_monomial), slots, word.right), sign * c))
        return result

    def word_delta(self, word: BarWord) -> WordTerms:
        terms: WordTerms = {}
        if word.length == 0:
            return terms
        for j in range(word.length + 1):
            for new_word, c in self.merge_terms(word, j):
                _add_term(terms, new_word, c)
        return terms

    def word_D(self, word: BarWord) -> WordTerms:
        terms = self.word_d(word)
        for new_word, c in self.word_delta(word).items():
            _add_term(terms, new_word, c)
        return terms

    @staticmethod
    def normalize(terms: WordTerms) -> WordTerms:
        """Drop words with a unit slot (they vanish in the normalized complex)"""
        return {w: c for w, c in terms.items() if not w.has_unit_slot}

    # ------------------------------------------------------------------ chains

    def chain(self, terms: WordTerms, degree: int) -> BarChain:
        return BarChain(degree, terms, self.source)

    def _check_chain(self, chain: BarChain) -> None:
        if chain.source and chain.source != self.source:
            raise PresentationError(f"Chain from {chain.source} used with {self.source}",
                                    invariant="incompatible-configs")
        if chain.degree > self.max_degree:
            raise TruncationError(f"Chain of degree {chain.degree} exceeds truncation {self.max_degree}",
                                  degree=chain.degree)

    def _apply(self, chain: BarChain, kind: str) -> BarChain:
        self._check_chain(chain)
        operator = {"d": self.word_d, "delta": self.word_delta, "D": self.word_D}[kind]
        terms: WordTerms = {}
        for word, coefficient in chain.terms.items():
            for new_word, c in operator(word).items():
                _add_term(terms, new_word, coefficient * c)
        return BarChain(chain.degree + 1, self.normalize(terms), self.source)

    def bar_d(self, chain: BarChain) -> BarChain:
        return self._apply(chain, "d")

    def bar_delta(self, chain: BarChain) -> BarChain:
        return self._apply(chain, "delta")

    def bar_D(self, chain: BarChain) -> BarChain:
        return self._apply(chain, "D")

    def unit_word(self) -> BarWord:
        return BarWord(UNIT, (), UNIT)

    def word_chain(self, word: BarWord, coefficient=1) -> BarChain:
        return BarChain.of(word, coefficient, self.source)

    # ------------------------------------------------------------------ matrices and cohomology

    def differential_matrix(self, n: int, kind: str = "D") -> RationalMatrix:
        """Matrix of d, δ or D from degree n to n + 1; columns follow ``bar_basis(n)``"""
        if kind not in DIFFERENTIALS:
            raise PresentationError(f"Unknown differential {kind!r}", invariant="differential-kind")
        key = (n, kind)
        cached = self._matrices.get(key)
        if cached is not None:
            return cached
        operator = {"d": self.word_d, "delta": self.word_delta, "D": self.word_D}[kind]
        source_basis = self.bar_basis(n)
        target_basis = self.bar_basis(n + 1)
        index = self._indices[n + 1]
        columns = []
        for word in source_basis:
            images = self.normalize(operator(word))
            columns.append({index[w]: c for w, c in images.items()})
        matrix = RationalMatrix.from_columns(columns, len(target_basis))
        with self._lock:
            self.stats["matrices_built"] += 1
            return self._matrices.setdefault(key, matrix)

    def to_vector(self, chain: BarChain) -> Dict[int, Fraction]:
        self.bar_basis(chain.degree)
        index = self._indices[chain.degree]
        return {index[w]: c for w, c in chain.terms.items()}

    def from_vector(self, n: int, vector: Dict[int, Fraction]) -> BarChain:
        basis = self.bar_basis(n)
        return BarChain(n, {basis[i]: c for i, c in vector.items()}, self.source)

    def slice_cohomology(self, n: int) -> SliceCohomology:
        if n > self.max_degree:
            raise TruncationError(f"Degree {n} exceeds truncation {self.max_degree}", degree=n)
        cached = self._cohomology.get(n)
        if cached is not None:
            return cached
        incoming = self.differential_matrix(n - 1) if n > 0 else None
        result = slice_cohomology(n, len(self.bar_basis(n)), incoming, self.differential_matrix(n))
        with self._lock:
            return self._cohomology.setdefault(n, result)

    def betti_numbers(self, through: Optional[int] = None) -> Dict[int, int]:
        top = self.max_degree if through is None else min(through, self.max_degree)
        slices = map_degrees(self.slice_cohomology, range(top + 1))
        return {s.degree: s.betti for s in slices}

    def representatives(self, n: int) -> List[BarChain]:
        return [self.from_vector(n, v) for v in self.slice_cohomology(n).representatives]

    def classify(self, chain: BarChain) -> List[Fraction]:
        return self.slice_cohomology(chain.degree).classify(self.to_vector(chain))

    @property
    def has_internal_differential(self) -> bool:
        return any(ring.presentation.has_differential for ring in (self.left, self.middle, self.right))

    def bigraded_betti(self, n: int) -> Dict[Tuple[int, int], int]:
        """
        Betti numbers of degree n split by (bar degree, tensor degree).

        Raises:
            HypothesisError: when an internal differential prevents the splitting
        """
        if self.has_internal_differential:
            raise HypothesisError("The complex does not split by tensor degree when d is nonzero",
                                  invariant="bigrading")
        if n > self.max_degree:
            raise TruncationError(f"Degree {n} exceeds truncation {self.max_degree}", degree=n)
        here = self.bar_basis(n)
        below = self.bar_basis(n - 1)
        above = self.bar_basis(n + 1)
        incoming = self.differential_matrix(n - 1) if n > 0 else None
        outgoing = self.differential_matrix(n)
        result: Dict[Tuple[int, int], int] = {}
        for t in sorted({w.tensor_degree for w in here}):
            rows_here = [i for i, w in enumerate(here) if w.tensor_degree == t]
            position = {i: p for p, i in enumerate(rows_here)}
            cols_below = [i for i, w in enumerate(below) if w.tensor_degree == t]
            rows_above = {i: p for p, i in enumerate(i for i, w in enumerate(above) if w.tensor_degree == t)}
            inc = None
            if incoming is not None and cols_below:
                below_position = {i: p for p, i in enumerate(cols_below)}
                inc = RationalMatrix(len(rows_here), len(cols_below), {
                    (position[i], below_position[j]): v for (i, j), v in incoming.entries.items()
                    if i in position and j in below_position})
            out = RationalMatrix(len(rows_above), len(rows_here), {
                (rows_above[i], position[j]): v for (i, j), v in outgoing.entries.items()
                if i in rows_above and j in position})
            betti = slice_cohomology(n, len(rows_here), inc, out).betti
            if betti:
                result[(n - t, t)] = betti
        return result

    # ------------------------------------------------------------------ display

    def _ring_factor_string(self, ring: GradedRing, factor: Factor) -> str:
        return polynomial_to_string({ring.degree_basis(factor[0])[factor[1]]: Fraction(1)}, ring.names)

    def slot_string(self, factor: Factor, display: bool = False) -> str:
        element = self.slot_element(factor)
        terms = dict(element.terms)
        if display:
            r_only = set(self.middle.presentation.r_indices)
            kept = {m: c for m, c in terms.items()
                    if any(e and i not in r_only for i, e in enumerate(m))}
            terms = kept or terms
        return polynomial_to_string(terms, self.middle.names)

    def word_string(self, word: BarWord, display: bool = False) -> str:
        parts = [self._ring_factor_string(self.left, word.left)]
        parts += [self.slot_string(s, display) for s in word.slots]
        parts.append(self._ring_factor_string(self.right, word.right))
        return "(" + " | ".join(parts) + ")"
