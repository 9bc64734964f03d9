"""
Tor_H(R, R) through the normalized bar complex, with ring structure and cross-checks.
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from eqloop.algebra.graded_ring import OVER_K, OVER_R
from eqloop.algebra.presentation import AlgebraPresentation
from eqloop.bar.bar_complex import BarComplex
from eqloop.bar.bar_config import UNIT, BarChain, BarConfig, BarWord
from eqloop.bar.over_r import OverRQuotient
from eqloop.bar.shuffle import shuffle_mul
from eqloop.cdga.cdga_engine import CdgaEngine, CdgaInstance
from eqloop.config.settings import EngineConfig
from eqloop.exceptions import EngineError, HypothesisError, InvariantError, PresentationError
from eqloop.linalg.rational_matrix import Subspace

logger = logging.getLogger(__name__)

MODE_BOTH = "both"

# (degree, index of the class in that degree)
ClassKey = Tuple[int, int]


@dataclass(frozen=True)
class TorRequest:
    algebra: AlgebraPresentation
    max_degree: int = EngineConfig.DEFAULT_MAX_DEGREE
    mode: str = OVER_R
    want_ring: bool = False
    want_representatives: bool = True
    oracle: Optional[AlgebraPresentation] = None
    crosscheck_degree: Optional[int] = None

    def __post_init__(self):
        if self.mode not in EngineConfig.MODES:
            raise PresentationError(f"Unknown mode {self.mode!r}; expected one of {EngineConfig.MODES}",
                                    invariant="mode")
        if self.max_degree < 0:
            raise PresentationError("max_degree must be non-negative", invariant="truncation")
        if self.crosscheck_degree is not None and self.crosscheck_degree < 0:
            raise PresentationError("crosscheck_degree must be non-negative", invariant="truncation")

    @property
    def primary_mode(self) -> str:
        return OVER_K if self.mode == OVER_K else OVER_R

    @property
    def over_k_degree(self) -> int:
        """Highest degree the over-k comparisons cover"""
        bound = EngineConfig.CROSSCHECK_DEGREE if self.crosscheck_degree is None else self.crosscheck_degree
        return min(bound, self.max_degree)


@dataclass
class CrosscheckReport:
    """Outcome of the independent verification paths; ``first_divergent_degree`` is None when all agree"""
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    first_divergent_degree: Optional[int] = None
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool, degree: Optional[int] = None, message: str = "") -> None:
        self.checks[name] = ok
        if not ok:
            self.failures.append(message or name)
            if degree is not None and (self.first_divergent_degree is None or degree < self.first_divergent_degree):
                self.first_divergent_degree = degree


@dataclass
class TorResult:
    algebra_name: str
    mode: str
    max_degree: int
    betti: Dict[int, int]
    bigraded_betti: Dict[int, Dict[Tuple[int, int], int]] = field(default_factory=dict)
    representatives: Dict[int, List[BarChain]] = field(default_factory=dict)
    representative_strings: Dict[int, List[str]] = field(default_factory=dict)
    display_strings: Dict[int, List[str]] = field(default_factory=dict)
    ring_constants: Dict[Tuple[ClassKey, ClassKey], List[Fraction]] = field(default_factory=dict)
    outside_truncation: List[Tuple[ClassKey, ClassKey]] = field(default_factory=list)
    r_module_structure: Dict[Tuple[str, ClassKey], List[Fraction]] = field(default_factory=dict)
    ring_rank_table: Dict[Tuple[int, int], int] = field(default_factory=dict)
    over_k_betti: Dict[int, int] = field(default_factory=dict)
    crosscheck_degree: Optional[int] = None
    crosscheck: Optional[CrosscheckReport] = None
    timing: Dict[str, float] = field(default_factory=dict)

    def poincare_coefficients(self) -> List[int]:
        return [self.betti.get(n, 0) for n in range(self.max_degree + 1)]

    def poincare_polynomial(self) -> str:
        terms = []
        for n, b in enumerate(self.poincare_coefficients()):
            if not b:
                continue
            power = "" if n == 0 else ("t" if n == 1 else f"t^{n}")
            if not power:
                terms.append(str(b))
            else:
                terms.append(power if b == 1 else f"{b}*{power}")
        return " + ".join(terms) or "0"


def chain_string(bar: BarComplex, chain: BarChain, display: bool = False) -> str:
    """Σ c·(word) with words in basis order; coefficient 1 is omitted"""
    if chain.is_zero():
        return "0"
    parts = []
    for word, c in chain.sorted_terms():
        text = bar.word_string(word, display)
        if c == 1:
            parts.append(f"+ {text}")
        elif c == -1:
            parts.append(f"- {text}")
        else:
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign} {abs(c)}*{text}")
    joined = " ".join(parts)
    return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]


class TorPipeline:
    """
    Runs a TorRequest: validation, the bar complex, classes, products and the cross-checks.

    Args:
        request: What to compute
        basis_cache: Optional basis cache shared by every ring built for the request
    """

    def __init__(self, request: TorRequest, basis_cache=None):
        self.request = request
        self.basis_cache = basis_cache
        self.max_degree = request.max_degree
        self.config = BarConfig.symmetric(request.algebra, request.primary_mode, request.max_degree)
        self.stats = {
            "slices_built": 0,
            "degrees_solved": 0,
            "products": 0,
            "errors": [],
        }
        self._validate_request()
        self.complex = BarComplex(self.config, basis_cache)
        self.complex.middle.validate_augmentation()
        self._quotient: Optional[OverRQuotient] = None
        self._over_k: Optional[BarComplex] = None

    def _validate_request(self) -> None:
        algebra = self.request.algebra
        if algebra.has_differential:
            raise HypothesisError(f"{algebra.name} has a nonzero differential; Tor needs a cohomology ring",
                                  invariant="zero-differential")

    @property
    def over_k(self) -> BarComplex:
        if self.complex.config.is_over_k:
            return self.complex
        if self._over_k is None:
            self._over_k = BarComplex(self.config.with_mode(OVER_K), self.basis_cache)
        return self._over_k

    @property
    def quotient(self) -> OverRQuotient:
        if self._quotient is None:
            self._quotient = OverRQuotient(self.config, self.basis_cache)
        return self._quotient

    # ------------------------------------------------------------------ operations

    def tor_betti(self) -> TorResult:
        """
        Betti numbers, bigraded table and representatives through the truncation.

        Raises:
            HypothesisError: simple connectivity, freeness or zero-divisor hypotheses fail
            InvariantError: mode "both" and the two complexes disagree
        """
        started = time.perf_counter()
        try:
            logger.info(f"🔢 Computing Tor for {self.request.algebra.name} ({self.request.mode}, N = {self.max_degree})")
            betti = self.complex.betti_numbers()
            self.stats["degrees_solved"] += len(betti)
            result = TorResult(
                algebra_name=self.request.algebra.name,
                mode=self.complex.mode,
                max_degree=self.max_degree,
                betti=betti,
            )
            if not self.complex.has_internal_differential:
                result.bigraded_betti = {n: self.complex.bigraded_betti(n) for n in range(self.max_degree + 1)}
            if self.request.want_representatives or self.request.want_ring:
                self._collect_representatives(result)
            if self.request.mode == MODE_BOTH:
                result.over_k_betti = self._over_k_betti(result)
                divergent = [n for n in sorted(result.over_k_betti) if betti[n] != result.over_k_betti[n]]
                if divergent:
                    raise InvariantError(
                        f"over-R and over-k Betti numbers differ from degree {divergent[0]}: "
                        f"{betti[divergent[0]]} vs {result.over_k_betti.get(divergent[0])}",
                        degree=divergent[0],
                    )
            self.stats["slices_built"] = self.complex.stats["slices_built"]
            result.timing["betti"] = time.perf_counter() - started
            logger.info(f"✅ Betti numbers: {result.poincare_coefficients()}")
            return result
        except EngineError as e:
            logger.error(f"Tor computation failed: {e}")
            self.stats["errors"].append(str(e))
            raise

    def _collect_representatives(self, result: TorResult) -> None:
        bar = self.complex
        for n in range(self.max_degree + 1):
            chains = bar.representatives(n)
            for chain in chains:
                if not bar.bar_D(chain).is_zero():
                    raise InvariantError(f"Representative in degree {n} is not a cocycle", degree=n)
            result.representatives[n] = chains
            result.representative_strings[n] = [chain_string(bar, c) for c in chains]
            result.display_strings[n] = [chain_string(bar, c, display=True) for c in chains]

    def tor_ring_constants(self, result: Optional[TorResult] = None) -> TorResult:
        """
        Shuffle products of representatives in class coordinates, the R-action and the rank table.

        Products of degree beyond the truncation are listed in ``outside_truncation``.
        """
        result = result or self.tor_betti()
        if not result.representatives:
            self._collect_representatives(result)
        started = time.perf_counter()
        bar = self.complex
        reps = result.representatives
        logger.info("📈 Computing shuffle ring constants...")
        for p in range(self.max_degree + 1):
            for q in range(self.max_degree + 1):
                for i, a in enumerate(reps.get(p, [])):
                    for j, b in enumerate(reps.get(q, [])):
                        key = ((p, i), (q, j))
                        if p + q > self.max_degree:
                            result.outside_truncation.append(key)
                            continue
                        result.ring_constants[key] = bar.classify(shuffle_mul(bar, a, b))
                        self.stats["products"] += 1
        result.ring_rank_table = self._rank_table(result)
        for r_name in self.request.algebra.r_generators:
            r_chain = self._r_chain(r_name)
            for p, chains in reps.items():
                if p + r_chain.degree > self.max_degree:
                    continue
                for i, chain in enumerate(chains):
                    product = shuffle_mul(bar, r_chain, chain)
                    result.r_module_structure[(r_name, (p, i))] = bar.classify(product)
        result.timing["ring"] = time.perf_counter() - started
        logger.info(f"Computed {len(result.ring_constants)} products, "
                    f"{len(result.outside_truncation)} outside the truncation")
        return result

    def _r_chain(self, r_name: str) -> BarChain:
        """(r | 1) as a chain of the complex"""
        bar = self.complex
        r = bar.middle.map_into(bar.left, bar.middle.generator(r_name))
        ((index, c),) = bar.left.to_vector(r).items()
        return bar.word_chain(BarWord((r.degree, index), (), UNIT), c)

    def _rank_table(self, result: TorResult) -> Dict[Tuple[int, int], int]:
        ranks: Dict[Tuple[int, int], int] = {}
        for p in range(1, self.max_degree + 1):
            for q in range(1, self.max_degree + 1 - p):
                products = [result.ring_constants[((p, i), (q, j))]
                            for i in range(result.betti.get(p, 0)) for j in range(result.betti.get(q, 0))]
                ranks[(p, q)] = Subspace.span(products, result.betti.get(p + q, 0)).dim
        return ranks

    def run(self) -> TorResult:
        result = self.tor_betti()
        if self.request.want_ring:
            self.tor_ring_constants(result)
        if self.request.mode == MODE_BOTH or self.request.oracle is not None:
            result.crosscheck = self.crosscheck(result)
        return result

    # ------------------------------------------------------------------ cross-checks

    def crosscheck(self, result: Optional[TorResult] = None) -> CrosscheckReport:
        """
        Compare the over-R result with the over-k complex, the projection between them, an oracle
        CDGA and a lower truncation.
        """
        result = result or self.tor_betti()
        report = CrosscheckReport()
        logger.info("🔍 Running cross-checks...")
        try:
            self._check_over_k(result, report)
            self._check_projection(report)
            if self.request.oracle is not None:
                self._check_oracle(result, report)
            self._check_truncation(result, report)
        except EngineError as e:
            logger.error(f"Cross-check aborted: {e}")
            self.stats["errors"].append(str(e))
            raise
        if report.passed:
            logger.info(f"✅ Cross-checks passed: {', '.join(report.checks)}")
        else:
            logger.error(f"❌ Cross-checks failed: {'; '.join(report.failures)}")
        return report

    def _over_k_betti(self, result: TorResult) -> Dict[int, int]:
        bound = self.request.over_k_degree
        result.crosscheck_degree = bound
        if bound < self.max_degree:
            logger.warning(f"Over-k comparison limited to degree {bound} of {self.max_degree}")
        return self.over_k.betti_numbers(through=bound)

    def _check_over_k(self, result: TorResult, report: CrosscheckReport) -> None:
        over_k = result.over_k_betti or self._over_k_betti(result)
        report.details["over_k_betti"] = over_k
        report.details["crosscheck_degree"] = self.request.over_k_degree
        divergent = [n for n in sorted(over_k) if result.betti.get(n) != over_k[n]]
        report.record("over_k_betti", not divergent, divergent[0] if divergent else None,
                      f"over-k Betti numbers differ from degree {divergent[0]}" if divergent else "")

    def _check_projection(self, report: CrosscheckReport) -> None:
        quotient = self.quotient
        for n in range(self.request.over_k_degree + 1):
            try:
                quotient.check_projection(n)
            except InvariantError as e:
                report.record("projection_chain_map", False, n, str(e))
                return
        report.record("projection_chain_map", True)

    def _check_oracle(self, result: TorResult, report: CrosscheckReport) -> None:
        engine = CdgaEngine(CdgaInstance(self.request.oracle, self.max_degree), self.basis_cache)
        table = engine.cohomology(with_ring=False)
        report.details["oracle_betti"] = table.betti
        divergent = [n for n in sorted(result.betti) if result.betti[n] != table.betti.get(n)]
        report.record("oracle_betti", not divergent, divergent[0] if divergent else None,
                      f"oracle Betti numbers differ from degree {divergent[0]}" if divergent else "")
        if not result.ring_rank_table:
            return
        oracle_ranks = engine.ring_rank_table()
        report.details["oracle_rank_table"] = oracle_ranks
        mismatched = sorted(key for key in result.ring_rank_table if result.ring_rank_table[key] != oracle_ranks.get(key))
        degree = sum(mismatched[0]) if mismatched else None
        report.record("oracle_ring", not mismatched, degree,
                      f"product ranks differ on degrees {mismatched[0]}" if mismatched else "")

    def _check_truncation(self, result: TorResult, report: CrosscheckReport) -> None:
        if self.max_degree == 0:
            report.record("truncation_consistency", True)
            return
        lower = BarComplex(self.config.with_max_degree(self.max_degree - 1), self.basis_cache)
        lower_betti = lower.betti_numbers()
        divergent = [n for n in sorted(lower_betti) if lower_betti[n] != result.betti.get(n)]
        report.record("truncation_consistency", not divergent, divergent[0] if divergent else None,
                      f"truncation {self.max_degree - 1} disagrees from degree {divergent[0]}" if divergent else "")
