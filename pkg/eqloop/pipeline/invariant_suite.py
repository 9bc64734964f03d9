"""
Exact structural checks of the bar complex of one presentation.

Exhaustive where the slices are enumerable (D², dδ + δd, Ds + sD on the spanning set of V,
closure of V, the projection to the over-R words) and randomized with a fixed seed where the
check ranges over pairs or triples of words (shuffle laws, V as an ideal).
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from eqloop.algebra.graded_ring import OVER_K, OVER_R
from eqloop.algebra.presentation import AlgebraPresentation
from eqloop.bar.bar_complex import BarComplex
from eqloop.bar.bar_config import BarChain, BarConfig
from eqloop.bar.over_r import OverRQuotient
from eqloop.bar.shuffle import shuffle_mul
from eqloop.config.settings import EngineConfig
from eqloop.exceptions import InvariantError

logger = logging.getLogger(__name__)


@dataclass
class SuiteReport:
    """Number of items checked per invariant; a failed invariant raises instead"""
    algebra_name: str
    max_degree: int
    counts: Dict[str, int] = field(default_factory=dict)


class InvariantSuite:
    """
    Args:
        algebra: Presentation of H (zero differential)
        max_degree: Degree bound of the checks
        seed: Seed of the randomized checks
        samples: Number of random word pairs or triples per degree combination
    """

    def __init__(self, algebra: AlgebraPresentation, max_degree: Optional[int] = None,
                 seed: Optional[int] = None, samples: int = 4, basis_cache=None):
        self.algebra = algebra
        self.max_degree = EngineConfig.CHECK_DEGREE if max_degree is None else max_degree
        self.random = random.Random(EngineConfig.CHECK_SEED if seed is None else seed)
        self.samples = samples
        config = BarConfig.symmetric(algebra, OVER_R, self.max_degree)
        self.quotient = OverRQuotient(config, basis_cache)
        self.complexes = {OVER_K: self.quotient.over_k, OVER_R: self.quotient.over_r}

    def run(self) -> SuiteReport:
        """
        Raises:
            InvariantError: naming the first failing invariant and degree
        """
        report = SuiteReport(self.algebra.name, self.max_degree)
        checks: List[Callable[[SuiteReport], None]] = [
            self.check_differentials,
            self.check_shuffle,
            self.check_v,
            self.check_projection,
        ]
        for check in checks:
            try:
                check(report)
            except InvariantError as e:
                logger.error(f"Invariant check {check.__name__} failed: {e}")
                raise
        logger.info(f"✅ Invariant suite passed for {self.algebra.name}: {report.counts}")
        return report

    # ------------------------------------------------------------------ differentials

    def check_differentials(self, report: SuiteReport) -> None:
        """D² = d² = δ² = 0 and dδ + δd = 0, as matrix identities on every computed degree"""
        for mode, bar in self.complexes.items():
            count = 0
            for n in range(self.max_degree):
                first = {kind: bar.differential_matrix(n, kind) for kind in ("d", "delta", "D")}
                second = {kind: bar.differential_matrix(n + 1, kind) for kind in ("d", "delta", "D")}
                for kind in ("D", "d", "delta"):
                    if not (second[kind] @ first[kind]).is_zero():
                        raise InvariantError(f"{kind}² is nonzero on {mode} degree {n}", degree=n)
                anti = second["d"] @ first["delta"] + second["delta"] @ first["d"]
                if not anti.is_zero():
                    raise InvariantError(f"dδ + δd is nonzero on {mode} degree {n}", degree=n)
                count += first["D"].cols
            report.counts[f"differentials_{mode}"] = count

    # ------------------------------------------------------------------ shuffle product

    def _random_word(self, bar: BarComplex, n: int) -> Optional[BarChain]:
        basis = bar.bar_basis(n)
        if not basis:
            return None
        return bar.word_chain(self.random.choice(basis), self.random.choice((1, -1, 2)))

    def check_shuffle(self, report: SuiteReport) -> None:
        """Graded commutativity, associativity and the Leibniz rule for D"""
        top = self.max_degree
        for mode, bar in self.complexes.items():
            count = 0
            for p in range(top + 1):
                for q in range(top + 1 - p):
                    for _ in range(self.samples):
                        a, b = self._random_word(bar, p), self._random_word(bar, q)
                        if a is None or b is None:
                            continue
                        self._check_pair(bar, mode, a, b)
                        count += 1
                        for r in range(top + 1 - p - q):
                            c = self._random_word(bar, r)
                            if c is None:
                                continue
                            if shuffle_mul(bar, shuffle_mul(bar, a, b), c) != shuffle_mul(bar, a, shuffle_mul(bar, b, c)):
                                raise InvariantError(f"Shuffle product is not associative on {mode} "
                                                     f"degrees ({p}, {q}, {r})", degree=p + q + r)
            report.counts[f"shuffle_{mode}"] = count

    def _check_pair(self, bar: BarComplex, mode: str, a: BarChain, b: BarChain) -> None:
        p, q = a.degree, b.degree
        ab = shuffle_mul(bar, a, b)
        ba = shuffle_mul(bar, b, a)
        if ab != ba.scale(-1 if (p * q) % 2 else 1):
            raise InvariantError(f"Shuffle product is not graded commutative on {mode} degrees ({p}, {q})",
                                 degree=p + q)
        left = bar.bar_D(ab)
        right = shuffle_mul(bar, bar.bar_D(a), b) + shuffle_mul(bar, a, bar.bar_D(b)).scale(-1 if p % 2 else 1)
        if left != right:
            raise InvariantError(f"D is not a derivation of the shuffle product on {mode} degrees ({p}, {q})",
                                 degree=p + q)

    # ------------------------------------------------------------------ V and s

    def check_v(self, report: SuiteReport) -> None:
        """Ds + sD = eval on the spanning set, D(V) ⊂ V, and V is a shuffle ideal"""
        quotient = self.quotient
        bar = quotient.over_k
        marked_checked = 0
        ideal_checked = 0
        for n in range(self.max_degree + 1):
            marked_checked += quotient.check_homotopy(n)
            if n < self.max_degree:
                quotient.check_v_closed(n)
            relations = quotient.v_subspace(n)
            if not relations.basis:
                continue
            for m in range(self.max_degree + 1 - n):
                target = quotient.v_subspace(n + m)
                for _ in range(self.samples):
                    w = self._random_word(bar, m)
                    if w is None:
                        continue
                    v = bar.from_vector(n, self.random.choice(relations.basis))
                    product = shuffle_mul(bar, v, w)
                    if not target.contains(bar.to_vector(product)):
                        raise InvariantError(f"V is not a shuffle ideal in degrees ({n}, {m})", degree=n + m)
                    ideal_checked += 1
        report.counts["homotopy_marked_words"] = marked_checked
        report.counts["v_ideal_products"] = ideal_checked

    def check_projection(self, report: SuiteReport) -> None:
        """The projection to the over-R words is a chain map with kernel V, and dimensions agree"""
        quotient = self.quotient
        for n in range(self.max_degree + 1):
            quotient_dim, over_r_dim = quotient.dimension_agreement(n)
            if quotient_dim != over_r_dim:
                raise InvariantError(f"Quotient by V has dimension {quotient_dim} in degree {n}, "
                                     f"the over-R complex {over_r_dim}", degree=n)
            quotient.check_projection(n)
        report.counts["projection_degrees"] = self.max_degree + 1
