import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from eqloop.algebra.graded_ring import OVER_K, OVER_R
from eqloop.bar import UNIT, BarChain, BarComplex, BarConfig, BarWord, shuffle_mul
from eqloop.exceptions import HypothesisError, PresentationError, TruncationError
from eqloop.pipeline.tor_pipeline import chain_string

XI = (2, 0)


def xi_word(n: int) -> BarWord:
    """(1 | ξ | … | ξ | 1) with n slots"""
    return BarWord(UNIT, (XI,) * n, UNIT)


def u_power_word(n: int) -> BarWord:
    """(u^{n/2} | 1)"""
    return BarWord((n, 0), (), UNIT)


class TestBarWords:
    """Words, chains and configurations"""

    def test_word_degrees(self):
        word = BarWord((2, 0), ((2, 0), (3, 1)), UNIT)
        assert word.length == 2
        assert word.bar_degree == -2
        assert word.tensor_degree == 7
        assert word.complex_degree == 5
        assert not word.has_unit_slot
        assert BarWord(UNIT, (UNIT,), UNIT).has_unit_slot

    def test_epsilons(self):
        word = BarWord((2, 0), ((2, 0), (3, 0)), UNIT)
        assert BarComplex.epsilons(word) == [2, 3, 5]

    def test_from_factors(self):
        word = BarWord((2, 0), ((2, 0),), (4, 1))
        assert BarWord.from_factors(word.factors()) == word

    def test_chain_drops_zero_coefficients(self):
        chain = BarChain(1, {xi_word(1): Fraction(0)})
        assert chain.is_zero()
        assert chain == BarChain.zero(5)

    def test_chain_degree_mismatch(self):
        with pytest.raises(PresentationError) as excinfo:
            BarChain(2, {xi_word(1): Fraction(1)})
        assert excinfo.value.invariant == "chain-degree"

    def test_chain_arithmetic(self):
        a = BarChain.of(xi_word(1), 2)
        b = BarChain.of(xi_word(1), -2)
        assert (a + b).is_zero()
        assert (a - b).coefficient(xi_word(1)) == 4
        assert a.scale(Fraction(1, 2)) == BarChain.of(xi_word(1))

    def test_incompatible_sources(self):
        a = BarChain.of(xi_word(1), 1, source="first")
        b = BarChain.of(xi_word(1), 1, source="second")
        with pytest.raises(PresentationError) as excinfo:
            a + b
        assert excinfo.value.invariant == "incompatible-configs"

    def test_symmetric_config(self, s2_circle):
        config = BarConfig.symmetric(s2_circle, OVER_R, 6)
        assert config.left is config.right
        assert config.left.name != s2_circle.name
        assert config.is_over_r
        assert config.with_mode(OVER_K).is_over_k
        assert config.with_max_degree(3).max_degree == 3

    def test_unknown_mode(self, s2_circle):
        with pytest.raises(PresentationError) as excinfo:
            BarConfig.symmetric(s2_circle, "over-z", 4)
        assert excinfo.value.invariant == "mode"

    def test_negative_truncation(self, s2_circle):
        with pytest.raises(PresentationError):
            BarConfig.symmetric(s2_circle, OVER_R, -1)


class TestOverRComplex:
    """Tor over H = k[x,u]/(x² - u²) with tensor products over R = k[u]"""

    @pytest.fixture
    def bar(self, s2_circle):
        return BarComplex(BarConfig.symmetric(s2_circle, OVER_R, 12))

    def test_betti_numbers(self, bar):
        assert bar.betti_numbers() == {n: 1 for n in range(13)}

    def test_single_slot_generator(self, bar):
        assert len(bar.slot_basis(2)) == 1
        assert bar.slot_basis(3) == []
        assert bar.slot_string(XI) == "x + u"
        assert bar.slot_string(XI, display=True) == "x"

    def test_low_degree_representatives(self, bar):
        (first,) = bar.representatives(1)
        (second,) = bar.representatives(2)
        assert chain_string(bar, first) == "(1 | x + u | 1)"
        assert chain_string(bar, first, display=True) == "(1 | x | 1)"
        assert chain_string(bar, second) == "(u | 1)"

    @pytest.mark.parametrize("n", [1, 3, 5, 7, 9, 11])
    def test_odd_representative_contains_xi_power(self, bar, n):
        (chain,) = bar.representatives(n)
        assert chain.coefficient(xi_word(n)) != 0

    @pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
    def test_even_representative_contains_u_power(self, bar, n):
        (chain,) = bar.representatives(n)
        assert chain.coefficient(u_power_word(n)) != 0

    def test_representatives_are_cocycles(self, bar):
        for n in range(8):
            for chain in bar.representatives(n):
                assert bar.bar_D(chain).is_zero()

    def test_bigraded_betti(self, bar):
        assert bar.bigraded_betti(3) == {(-3, 6): 1}
        assert bar.bigraded_betti(4) == {(0, 4): 1}

    def test_classify_representative(self, bar):
        (chain,) = bar.representatives(5)
        assert bar.classify(chain) == [1]
        assert bar.classify(chain.scale(3)) == [3]

    def test_truncation(self, bar):
        with pytest.raises(TruncationError) as excinfo:
            bar.slice_cohomology(13)
        assert excinfo.value.degree == 13
        with pytest.raises(TruncationError):
            bar.bar_basis(14)

    def test_outer_factors_must_be_r(self, s2_circle):
        config = BarConfig(left=s2_circle, middle=s2_circle, right=s2_circle, mode=OVER_R, max_degree=4)
        with pytest.raises(HypothesisError) as excinfo:
            BarComplex(config)
        assert excinfo.value.invariant == "outer-factors-R"


class TestOverKComplex:
    """Tor with tensor products over the ground field"""

    def test_s2_circle_betti(self, s2_circle):
        bar = BarComplex(BarConfig.symmetric(s2_circle, OVER_K, 6))
        assert bar.betti_numbers() == {n: 1 for n in range(7)}

    def test_differential_squares_to_zero(self, s2_circle):
        bar = BarComplex(BarConfig.symmetric(s2_circle, OVER_K, 6))
        for n in range(5):
            assert (bar.differential_matrix(n + 1) @ bar.differential_matrix(n)).is_zero()

    def test_point(self, point):
        bar = BarComplex(BarConfig.symmetric(point, OVER_K, 8))
        assert bar.betti_numbers() == {n: 1 if n % 2 == 0 else 0 for n in range(9)}

    def test_trivial_r(self, s2_trivial):
        bar = BarComplex(BarConfig.symmetric(s2_trivial, OVER_K, 12))
        assert bar.betti_numbers() == {n: 1 for n in range(13)}

    def test_point_over_r(self, point):
        bar = BarComplex(BarConfig.symmetric(point, OVER_R, 12))
        assert bar.betti_numbers() == {n: 1 if n % 2 == 0 else 0 for n in range(13)}

    @pytest.mark.parametrize("fixture", ["lambda_uxy", "lambda_e1e2"])
    def test_simple_connectivity(self, request, fixture):
        algebra = request.getfixturevalue(fixture)
        bar = BarComplex(BarConfig.symmetric(algebra, OVER_K, 4))
        with pytest.raises(HypothesisError) as excinfo:
            bar.bar_basis(2)
        assert excinfo.value.invariant == "simple-connectivity"


class TestShuffle:
    """Shuffle product on words and chains"""

    @pytest.fixture
    def bar(self, s2_circle):
        return BarComplex(BarConfig.symmetric(s2_circle, OVER_R, 8))

    def test_unit(self, bar):
        xi = bar.word_chain(xi_word(1))
        unit = bar.word_chain(bar.unit_word())
        assert shuffle_mul(bar, unit, xi) == xi
        assert shuffle_mul(bar, xi, unit) == xi

    def test_odd_square_vanishes(self, bar):
        xi = bar.word_chain(xi_word(1))
        assert shuffle_mul(bar, xi, xi).is_zero()

    def test_graded_commutative(self, bar):
        a = bar.word_chain(xi_word(1))
        b = bar.word_chain(xi_word(2))
        assert shuffle_mul(bar, a, b) == shuffle_mul(bar, b, a)

    def test_leibniz(self, bar):
        a = bar.word_chain(xi_word(1))
        b = bar.word_chain(u_power_word(2))
        left = bar.bar_D(shuffle_mul(bar, a, b))
        right = shuffle_mul(bar, bar.bar_D(a), b) - shuffle_mul(bar, a, bar.bar_D(b))
        assert left == right

    def test_product_beyond_truncation(self, bar):
        a = bar.word_chain(xi_word(5))
        with pytest.raises(TruncationError):
            shuffle_mul(bar, a, a)

    def test_foreign_chain(self, bar):
        foreign = BarChain.of(xi_word(1), 1, source="elsewhere")
        with pytest.raises(PresentationError) as excinfo:
            shuffle_mul(bar, foreign, foreign)
        assert excinfo.value.invariant == "incompatible-configs"
