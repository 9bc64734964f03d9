"""
Shuffle product on the bar complex.

(a|S|c)·(a'|S'|c') = ± (a·a' | S ⧢ S' | c·c'), summed over the (k, l)-shuffles of the slot
lists. Signs are Koszul signs in suspended degree (a slot of degree m counts as m - 1):
moving a' left past S and c, moving c right past S', and every slot of S' that jumps ahead
of a slot of S.
"""

import logging
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, Tuple

from eqloop.bar.bar_complex import BarComplex, WordTerms
from eqloop.bar.bar_config import BarChain, BarWord, Factor
from eqloop.exceptions import PresentationError, TruncationError

logger = logging.getLogger(__name__)


def _suspended(slots: Tuple[Factor, ...]) -> int:
    return sum(s[0] - 1 for s in slots)


def shuffles(first: Tuple[Factor, ...], second: Tuple[Factor, ...]) -> Iterator[Tuple[Tuple[Factor, ...], int]]:
    """Interleavings of two slot lists with the parity of their Koszul sign"""
    k, l = len(first), len(second)
    for positions in combinations(range(k + l), k):
        chosen = set(positions)
        merged = []
        parity = 0
        i = j = 0
        passed_second = 0
        for place in range(k + l):
            if place in chosen:
                merged.append(first[i])
                parity += (first[i][0] - 1) * passed_second
                i += 1
            else:
                merged.append(second[j])
                passed_second += second[j][0] - 1
                j += 1
        yield tuple(merged), parity % 2


def shuffle_words(bar: BarComplex, p: BarWord, q: BarWord) -> WordTerms:
    outer_parity = q.left[0] * (_suspended(p.slots) + p.right[0]) + p.right[0] * _suspended(q.slots)
    left = bar.left.multiply(bar.left_element(p.left), bar.left_element(q.left))
    right = bar.right.multiply(bar.right_element(p.right), bar.right_element(q.right))
    left_terms = [((left.degree, i), c) for i, c in sorted(bar.left.to_vector(left).items())]
    right_terms = [((right.degree, i), c) for i, c in sorted(bar.right.to_vector(right).items())]
    terms: WordTerms = {}
    if not left_terms or not right_terms:
        return terms
    for slots, parity in shuffles(p.slots, q.slots):
        sign = -1 if (outer_parity + parity) % 2 else 1
        for left_factor, a in left_terms:
            for right_factor, c in right_terms:
                word = BarWord(left_factor, slots, right_factor)
                value = terms.get(word, Fraction(0)) + sign * a * c
                if value:
                    terms[word] = value
                else:
                    terms.pop(word, None)
    return terms


def shuffle_mul(bar: BarComplex, p: BarChain, q: BarChain) -> BarChain:
    """
    Shuffle product of two chains of the same configuration.

    Raises:
        PresentationError: the chains come from different configurations
        TruncationError: the product degree exceeds the truncation
    """
    for chain in (p, q):
        if chain.source and chain.source != bar.source:
            raise PresentationError(f"Chain from {chain.source} cannot be multiplied in {bar.source}",
                                    invariant="incompatible-configs")
    degree = p.degree + q.degree
    if degree > bar.max_degree + 1:
        raise TruncationError(f"Shuffle product of degree {degree} exceeds truncation {bar.max_degree}",
                              degree=degree)
    result: Dict[BarWord, Fraction] = {}
    for w1, c1 in p.terms.items():
        for w2, c2 in q.terms.items():
            for word, c in shuffle_words(bar, w1, w2).items():
                value = result.get(word, Fraction(0)) + c1 * c2 * c
                if value:
                    result[word] = value
                else:
                    result.pop(word, None)
    return BarChain(degree, result, bar.source)
