"""
Passage from the bar complex over k to the bar complex over R.

The subcomplex V of B̄_k(R, H, R) is spanned by r-moves: for a word w, a marker p between the
factors p and p+1 (0 is the left factor, k+1 the right one) and an r-generator r,

    eval(w, p, r) = w with r multiplied into factor p  -  w with r multiplied into factor p+1.

When the base word carries a unit slot next to the marker the move produces a single word with
a slot r, so V also kills pure-R slots. B̄_k / V is the normalized complex over R.

The contracting homotopy inserts r as a new slot at the marker:

    s(w, p, r) = -(-1)^{ε_p} (a | b₁ | … | b_p | r | b_{p+1} | … | c)

and the differential lifts to marked words (the merge across the marker is dropped), so that
D s(m) + s(D m) = eval(m) on every marked word.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Tuple

from eqloop.algebra.graded_ring import OVER_K, OVER_R, GradedRing
from eqloop.algebra.monomials import Monomial
from eqloop.algebra.presentation import GradedElement
from eqloop.bar.bar_complex import BarComplex, WordTerms, _add_term
from eqloop.bar.bar_config import UNIT, BarChain, BarConfig, BarWord, Factor
from eqloop.exceptions import InvariantError, PresentationError
from eqloop.linalg.rational_matrix import RationalMatrix, Subspace, kernel_basis, solve_linear

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MarkedWord:
    """A base word over k, a marker position and the index of an r-generator"""
    word: BarWord
    marker: int
    r_index: int


MarkedTerms = Dict[MarkedWord, Fraction]


@dataclass(frozen=True)
class QuotientSlice:
    """
    One degree of B̄_k / V.

    ``words`` is the ambient over-k basis (restricted to one slot count when ``length`` is
    set), ``relations`` is V in those coordinates and ``projection`` sends an ambient vector to
    its coordinates on ``quotient_words``.
    """
    degree: int
    length: Optional[int]
    words: Tuple[BarWord, ...]
    relations: Subspace
    quotient_words: Tuple[BarWord, ...]
    projection: RationalMatrix

    @property
    def dimension(self) -> int:
        return len(self.quotient_words)


def _add_marked(terms: MarkedTerms, marked: MarkedWord, coefficient: Fraction) -> None:
    value = terms.get(marked, Fraction(0)) + coefficient
    if value:
        terms[marked] = value
    else:
        terms.pop(marked, None)


class OverRQuotient:
    """
    The over-k and over-R complexes of one configuration, with V, s and the projection between them.

    Args:
        config: A configuration with outer factors R; its mode is ignored
        basis_cache: Optional basis cache for the underlying rings

    Raises:
        HypothesisError: the over-R complex is not defined (R-freeness or zero divisors)
    """

    def __init__(self, config: BarConfig, basis_cache=None):
        self.over_k = BarComplex(config.with_mode(OVER_K), basis_cache)
        self.over_r = BarComplex(config.with_mode(OVER_R), basis_cache)
        self.max_degree = config.max_degree
        middle = self.over_k.middle
        self.r_names = config.middle.r_generators
        self._r_middle = [middle.generator(name) for name in self.r_names]
        self._r_left = [middle.map_into(self.over_k.left, r) for r in self._r_middle]
        self._r_right = [middle.map_into(self.over_k.right, r) for r in self._r_middle]
        self._slices: Dict[Tuple[int, bool, Optional[int]], QuotientSlice] = {}
        self._projections: Dict[Factor, List[Tuple[Optional[Monomial], Factor, Fraction]]] = {}
        self._projection_matrices: Dict[int, RationalMatrix] = {}

    # ------------------------------------------------------------------ marked words

    def _times_r(self, ring: GradedRing, element: GradedElement, r: GradedElement) -> List[Tuple[Factor, Fraction]]:
        value = ring.multiply(element, r)
        return [((value.degree, i), c) for i, c in sorted(ring.to_vector(value).items())]

    def _moved(self, word: BarWord, factor: int, r_index: int) -> WordTerms:
        """The word with the r-generator multiplied into one factor"""
        bar = self.over_k
        terms: WordTerms = {}
        if factor == 0:
            for left, c in self._times_r(bar.left, bar.left_element(word.left), self._r_left[r_index]):
                _add_term(terms, BarWord(left, word.slots, word.right), c)
        elif factor == word.length + 1:
            for right, c in self._times_r(bar.right, bar.right_element(word.right), self._r_right[r_index]):
                _add_term(terms, BarWord(word.left, word.slots, right), c)
        else:
            slot = bar.slot_element(word.slots[factor - 1])
            for new_slot, c in self._times_r(bar.middle, slot, self._r_middle[r_index]):
                slots = word.slots[:factor - 1] + (new_slot,) + word.slots[factor:]
                _add_term(terms, BarWord(word.left, slots, word.right), c)
        return terms

    def evaluate(self, marked: MarkedWord) -> WordTerms:
        """The r-move difference of a marked word, in the normalized complex"""
        terms = self._moved(marked.word, marked.marker, marked.r_index)
        for word, c in self._moved(marked.word, marked.marker + 1, marked.r_index).items():
            _add_term(terms, word, -c)
        return BarComplex.normalize(terms)

    def marked_D(self, marked: MarkedWord) -> MarkedTerms:
        """D on the base word, keeping track of the marker; the merge across the marker is dropped"""
        bar = self.over_k
        word, p = marked.word, marked.marker
        terms: MarkedTerms = {}
        for new_word, c in bar.word_d(word).items():
            _add_marked(terms, MarkedWord(new_word, p, marked.r_index), c)
        if word.length:
            for j in range(word.length + 1):
                if j == p:
                    continue
                marker = p - 1 if j < p else p
                for new_word, c in bar.merge_terms(word, j):
                    _add_marked(terms, MarkedWord(new_word, marker, marked.r_index), c)
        return terms

    def insert(self, marked: MarkedWord) -> WordTerms:
        """The homotopy s on one marked word; zero when the base carries a unit slot"""
        word, p = marked.word, marked.marker
        terms: WordTerms = {}
        if word.has_unit_slot:
            return terms
        bar = self.over_k
        r = self._r_middle[marked.r_index]
        sign = Fraction(1 if bar.epsilons(word)[p] % 2 else -1)
        for index, c in sorted(bar.middle.to_vector(r).items()):
            slots = word.slots[:p] + ((r.degree, index),) + word.slots[p:]
            _add_term(terms, BarWord(word.left, slots, word.right), sign * c)
        return terms

    def spanning_set(self, n: int, include_unit_moves: bool = True, length: Optional[int] = None) -> List[MarkedWord]:
        """
        Marked words whose r-moves span V in complex degree n.

        Args:
            n: Complex degree of the r-moves
            include_unit_moves: Also move r into and out of an inserted unit slot
            length: Only r-moves between words with this many slots
        """
        bar = self.over_k
        marked: List[MarkedWord] = []
        for r_index, r in enumerate(self._r_middle):
            for word in bar.bar_basis(n - r.degree):
                if length is None or word.length == length:
                    marked.extend(MarkedWord(word, p, r_index) for p in range(word.length + 1))
            if not include_unit_moves:
                continue
            for word in bar.bar_basis(n - r.degree + 1):
                if length is not None and word.length != length - 1:
                    continue
                for q in range(word.length + 1):
                    with_unit = BarWord(word.left, word.slots[:q] + (UNIT,) + word.slots[q:], word.right)
                    marked.append(MarkedWord(with_unit, q, r_index))
                    marked.append(MarkedWord(with_unit, q + 1, r_index))
        return marked

    # ------------------------------------------------------------------ V and the quotient

    def _eval_columns(self, n: int, marked: List[MarkedWord], index: Dict[BarWord, int]) -> List[Dict[int, Fraction]]:
        columns = []
        for m in marked:
            terms = self.evaluate(m)
            missing = [w for w in terms if w not in index]
            if missing:
                raise InvariantError(f"r-move of degree {n} leaves the ambient slice", degree=n)
            columns.append({index[w]: c for w, c in terms.items()})
        return columns

    def quotient_over_R(self, n: int, include_unit_moves: bool = True, length: Optional[int] = None) -> QuotientSlice:
        """
        B̄_k / V in complex degree n.

        With ``include_unit_moves=False`` only moves between non-unit factors are used; that
        span is smaller than V and the quotient is not the complex over R.
        """
        key = (n, include_unit_moves, length)
        cached = self._slices.get(key)
        if cached is not None:
            return cached
        words = tuple(w for w in self.over_k.bar_basis(n) if length is None or w.length == length)
        index = {w: i for i, w in enumerate(words)}
        marked = self.spanning_set(n, include_unit_moves, length)
        relations = Subspace.span(self._eval_columns(n, marked, index), len(words))
        pivots = set(relations.pivots)
        kept = [i for i in range(len(words)) if i not in pivots]
        position = {i: q for q, i in enumerate(kept)}
        columns = []
        for i in range(len(words)):
            remainder = relations.reduce({i: Fraction(1)})
            columns.append({position[j]: c for j, c in remainder.items()})
        projection = RationalMatrix.from_columns(columns, len(kept))
        result = QuotientSlice(n, length, words, relations, tuple(words[i] for i in kept), projection)
        logger.debug(f"{self.over_k.source}: degree {n} quotient {result.dimension} of {len(words)} "
                     f"(V dim {relations.dim})")
        return self._slices.setdefault(key, result)

    def v_subspace(self, n: int) -> Subspace:
        return self.quotient_over_R(n).relations

    def _lift(self, chain: BarChain) -> Tuple[List[MarkedWord], Dict[int, Fraction]]:
        n = chain.degree
        marked = self.spanning_set(n)
        index = {w: i for i, w in enumerate(self.over_k.bar_basis(n))}
        matrix = RationalMatrix.from_columns(self._eval_columns(n, marked, index), len(index))
        solution = solve_linear(matrix, self.over_k.to_vector(chain))
        if solution is None:
            raise PresentationError(f"Chain of degree {n} does not lie in the r-move subcomplex V", invariant="in-V")
        return marked, solution

    def _insert_all(self, terms: MarkedTerms) -> WordTerms:
        result: WordTerms = {}
        for marked, c in terms.items():
            for word, value in self.insert(marked).items():
                _add_term(result, word, c * value)
        return result

    def homotopy_s(self, chain: BarChain) -> BarChain:
        """
        s(v) for v in V, through a lift of v to marked words.

        Raises:
            PresentationError: v is not in V
        """
        marked, solution = self._lift(chain)
        terms = self._insert_all({marked[i]: c for i, c in solution.items()})
        return BarChain(chain.degree - 1, terms, self.over_k.source)

    def homotopy_identity(self, chain: BarChain) -> BarChain:
        """D s(v) + s(D v) for v in V, with both terms taken through the same lift; equals v"""
        marked, solution = self._lift(chain)
        lift = {marked[i]: c for i, c in solution.items()}
        s_v = BarChain(chain.degree - 1, self._insert_all(lift), self.over_k.source)
        d_lift: MarkedTerms = {}
        for m, c in lift.items():
            for image, value in self.marked_D(m).items():
                _add_marked(d_lift, image, c * value)
        s_dv = BarChain(chain.degree, BarComplex.normalize(self._insert_all(d_lift)), self.over_k.source)
        return self.over_k.bar_D(s_v) + s_dv

    def check_homotopy(self, n: int) -> int:
        """
        Check D s(m) + s(D m) = eval(m) on every marked word of degree n.

        Returns:
            The number of marked words checked
        Raises:
            InvariantError: on the first failing marked word
        """
        bar = self.over_k
        marked = self.spanning_set(n)
        for m in marked:
            total: WordTerms = {}
            for word, c in self.insert(m).items():
                for image, value in bar.word_D(word).items():
                    _add_term(total, image, c * value)
            for image, c in self.marked_D(m).items():
                for word, value in self.insert(image).items():
                    _add_term(total, word, c * value)
            if BarComplex.normalize(total) != self.evaluate(m):
                raise InvariantError(f"Ds + sD differs from the r-move on {bar.word_string(m.word)} "
                                     f"(marker {m.marker}, {self.r_names[m.r_index]})", degree=n)
        return len(marked)

    def check_v_closed(self, n: int) -> None:
        """D(V_n) ⊂ V_{n+1}"""
        matrix = self.over_k.differential_matrix(n)
        target = self.v_subspace(n + 1)
        for vector in self.v_subspace(n).basis:
            if not target.contains(matrix.apply(vector)):
                raise InvariantError(f"V is not closed under D in degree {n}", degree=n)

    # ------------------------------------------------------------------ projection to the over-R words

    def _slot_projection(self, factor: Factor) -> List[Tuple[Optional[Monomial], Factor, Fraction]]:
        cached = self._projections.get(factor)
        if cached is not None:
            return cached
        middle = self.over_k.middle
        slot = self.over_k.slot_element(factor)
        augmented = middle.augment(slot)
        lifted = middle.normal_form({middle.lift_from_r(m): c for m, c in augmented.terms.items()}, slot.degree)
        expansion = self.over_r.expand_slot(slot - lifted)
        return self._projections.setdefault(factor, expansion)

    def _r_monomial(self, ring: GradedRing, factor: Factor) -> Monomial:
        return ring.degree_basis(factor[0])[factor[1]]

    def project_word(self, word: BarWord) -> WordTerms:
        """(a | b₁ | … | c) -> Σ (a·c·r₁⋯r_k | e₁ | … | e_k | 1) where bᵢ - ιε(bᵢ) = Σ rᵢ·eᵢ"""
        target = self.over_r.left
        base = [x + y for x, y in zip(self._r_monomial(self.over_k.left, word.left),
                                      self._r_monomial(self.over_k.right, word.right))]
        terms: WordTerms = {}
        expansions = [self._slot_projection(slot) for slot in word.slots]
        for choice in product(*expansions):
            exponents = list(base)
            coefficient = Fraction(1)
            for r_monomial, _, c in choice:
                exponents = [x + y for x, y in zip(exponents, r_monomial)]
                coefficient *= c
            left = target.monomial_element(tuple(exponents))
            ((index, _),) = target.to_vector(left).items()
            slots = tuple(generator for _, generator, _ in choice)
            _add_term(terms, BarWord((left.degree, index), slots, UNIT), coefficient)
        return terms

    def projection_to_over_r(self, chain: BarChain) -> BarChain:
        terms: WordTerms = {}
        for word, c in chain.terms.items():
            for image, value in self.project_word(word).items():
                _add_term(terms, image, c * value)
        return BarChain(chain.degree, terms, self.over_r.source)

    def projection_matrix(self, n: int) -> RationalMatrix:
        cached = self._projection_matrices.get(n)
        if cached is not None:
            return cached
        index = {w: i for i, w in enumerate(self.over_r.bar_basis(n))}
        columns = [{index[w]: c for w, c in self.project_word(word).items()} for word in self.over_k.bar_basis(n)]
        matrix = RationalMatrix.from_columns(columns, len(index))
        return self._projection_matrices.setdefault(n, matrix)

    def check_projection(self, n: int) -> None:
        """
        The projection commutes with D in degree n, and its kernel there is V.

        Raises:
            InvariantError: naming the failing property
        """
        left = self.projection_matrix(n + 1) @ self.over_k.differential_matrix(n)
        right = self.over_r.differential_matrix(n) @ self.projection_matrix(n)
        if left != right:
            raise InvariantError(f"Projection to the over-R complex is not a chain map in degree {n}", degree=n)
        if kernel_basis(self.projection_matrix(n)) != self.v_subspace(n):
            raise InvariantError(f"Kernel of the projection differs from V in degree {n}", degree=n)

    def dimension_agreement(self, n: int) -> Tuple[int, int]:
        """(dim of B̄_k / V, number of over-R words) in degree n"""
        return self.quotient_over_R(n).dimension, len(self.over_r.bar_basis(n))
