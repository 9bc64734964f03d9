import sys
from pathlib import Path

import pytest

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from eqloop.algebra.graded_ring import OVER_K, OVER_R
from eqloop.cdga.cdga_engine import CdgaEngine, CdgaInstance
from eqloop.exceptions import PresentationError, TruncationError
from eqloop.extractors.presentation_extractor import parse_presentation


class TestCohomology:
    """Cohomology tables of small CDGAs"""

    def test_minimal_model_betti(self, lambda_uxy):
        engine = CdgaEngine(CdgaInstance(lambda_uxy, 6))
        table = engine.cohomology(with_ring=False)
        assert table.poincare_coefficients() == [1, 1, 1, 1, 1, 1, 1]
        assert table.euler_characteristic() == 1

    def test_minimal_model_betti_to_ten(self, lambda_uxy):
        engine = CdgaEngine(CdgaInstance(lambda_uxy, 10))
        assert engine.cohomology(with_ring=False).poincare_coefficients() == [1] * 11

    @pytest.mark.parametrize("order", [("y", "x", "u"), ("x", "u", "y"), ("u", "y", "x")])
    def test_generator_order_does_not_matter(self, lambda_uxy, order):
        expected = CdgaEngine(CdgaInstance(lambda_uxy, 6)).cohomology(with_ring=False).betti
        reordered = lambda_uxy.with_generator_order(order)
        assert CdgaEngine(CdgaInstance(reordered, 6)).cohomology(with_ring=False).betti == expected

    def test_zero_differential_free_algebra(self, lambda_e1e2):
        engine = CdgaEngine(CdgaInstance(lambda_e1e2, 8))
        assert engine.cohomology(with_ring=False).poincare_coefficients() == [1] * 9

    def test_zero_differential_ring(self, s2_circle):
        engine = CdgaEngine(CdgaInstance(s2_circle, 6))
        table = engine.cohomology(with_ring=False)
        assert table.poincare_coefficients() == [1, 0, 2, 0, 2, 0, 2]
        assert table.chain_dimensions == table.betti

    def test_representatives(self, lambda_uxy):
        engine = CdgaEngine(CdgaInstance(lambda_uxy, 4))
        ring = engine.ring
        assert engine.representatives(1) == [ring.element("x")]
        assert engine.representatives(2) == [ring.element("u")]
        assert engine.representatives(3) == [ring.element("x*y")]
        assert engine.representatives(4) == [ring.element("u^2")]

    def test_coboundary(self, lambda_uxy):
        engine = CdgaEngine(CdgaInstance(lambda_uxy, 4))
        ux = engine.ring.element("u*x")
        assert engine.is_cocycle(ux)
        assert engine.is_coboundary(ux)
        assert engine.lift(ux) == engine.ring.element("y")

    def test_truncation(self, lambda_uxy):
        engine = CdgaEngine(CdgaInstance(lambda_uxy, 3))
        with pytest.raises(TruncationError):
            engine.slice_cohomology(4)

    def test_negative_truncation(self, lambda_uxy):
        with pytest.raises(PresentationError):
            CdgaInstance(lambda_uxy, -1)


class TestRingStructure:
    """Products in H(⋀(u, x, y), dy = ux)"""

    @pytest.fixture
    def engine(self, lambda_uxy):
        return CdgaEngine(CdgaInstance(lambda_uxy, 8))

    def test_ux_vanishes(self, engine):
        constants = engine.ring_constants()
        assert constants[((1, 0), (2, 0))] == [0]
        assert constants[((2, 0), (2, 0))] == [1]

    def test_unit(self, engine):
        constants = engine.ring_constants()
        for q in range(9):
            assert constants[((0, 0), (q, 0))] == [1]

    def test_rank_table(self, engine):
        ranks = engine.ring_rank_table()
        for (p, q), rank in ranks.items():
            expected = 1 if p % 2 == 0 and q % 2 == 0 else 0
            assert rank == expected, (p, q)


class TestMassey:
    """Triple Massey products"""

    @pytest.fixture
    def engine(self, lambda_uxy):
        return CdgaEngine(CdgaInstance(lambda_uxy, 6))

    def test_nontrivial_massey(self, engine):
        ring = engine.ring
        result = engine.massey_triple(ring.element("x"), ring.element("u"), ring.element("x"))
        assert result.defined
        assert result.degree == 3
        assert result.indeterminacy_dim == 0
        assert not result.contains_zero
        assert any(result.class_coordinates)

    def test_supplied_lifts(self, engine):
        ring = engine.ring
        y = ring.element("y")
        result = engine.massey_triple(ring.element("x"), ring.element("u"), ring.element("x"), lifts=(y, y))
        assert result.representative == ring.element("2*x*y")
        assert not result.contains_zero

    def test_perturbed_lift_keeps_the_class(self, engine):
        ring = engine.ring
        x, u, y = ring.element("x"), ring.element("u"), ring.element("y")
        default = engine.massey_triple(x, u, x)
        perturbed = engine.massey_triple(x, u, x, lifts=(y + u, y))
        assert perturbed.representative == ring.element("2*x*y + u*x")
        assert perturbed.representative != default.representative
        assert perturbed.class_coordinates == default.class_coordinates
        assert perturbed.contains_zero == default.contains_zero

    def test_bad_lift(self, engine):
        ring = engine.ring
        with pytest.raises(PresentationError) as excinfo:
            engine.massey_triple(ring.element("x"), ring.element("u"), ring.element("x"),
                                 lifts=(ring.element("u"), ring.element("y")))
        assert excinfo.value.invariant == "massey-lift"

    def test_undefined(self, engine):
        ring = engine.ring
        result = engine.massey_triple(ring.element("u"), ring.element("u"), ring.element("x"))
        assert not result.defined
        assert result.reason

    def test_non_cocycle_argument(self, engine):
        ring = engine.ring
        with pytest.raises(PresentationError) as excinfo:
            engine.massey_triple(ring.element("y"), ring.element("u"), ring.element("x"))
        assert excinfo.value.invariant == "cocycle"

    def test_beyond_truncation(self, lambda_uxy):
        engine = CdgaEngine(CdgaInstance(lambda_uxy, 2))
        ring = engine.ring
        with pytest.raises(TruncationError):
            engine.massey_triple(ring.element("x"), ring.element("u"), ring.element("x"))


class TestIndecomposables:
    """Pseudo-dual homotopy groups"""

    def test_minimal_model(self, lambda_uxy):
        engine = CdgaEngine(CdgaInstance(lambda_uxy, 4))
        table = engine.indecomposables_homotopy(OVER_K)
        assert table.as_list() == [1, 2, 0, 0]
        assert table.induced_differential_zero
        assert engine.is_minimal()

    def test_over_r_without_r_generators_matches_over_k(self, lambda_uxy):
        engine = CdgaEngine(CdgaInstance(lambda_uxy, 4))
        assert engine.indecomposables_homotopy(OVER_R).as_list() == engine.indecomposables_homotopy(OVER_K).as_list()

    def test_over_r_reduces_by_r_generators(self):
        text = "algebra L\ngenerator u degree 2\ngenerator x degree 1\ngenerator y degree 2\n" \
               "rbase u\ndifferential y -> u*x\n"
        engine = CdgaEngine(CdgaInstance(parse_presentation(text), 4))
        over_r = engine.indecomposables_homotopy(OVER_R)
        assert over_r.as_list() == [1, 0, 0, 0]
        assert not over_r.induced_differential_zero
        assert engine.indecomposables_homotopy(OVER_K).as_list() == [1, 2, 0, 0]

    def test_truncated_polynomial(self, s2_trivial):
        engine = CdgaEngine(CdgaInstance(s2_trivial, 4))
        assert engine.indecomposables_homotopy(OVER_K).as_list() == [0, 1, 0, 0]

    def test_non_minimal(self):
        text = "generator a degree 2\ngenerator b degree 3\ndifferential b -> a^2\n" \
               "generator c degree 1\ngenerator e degree 2\ndifferential e -> 0\n"
        algebra = parse_presentation(text)
        assert CdgaEngine(CdgaInstance(algebra, 4)).is_minimal()
        linear = parse_presentation("generator a degree 2\ngenerator b degree 1\ndifferential b -> a\n")
        assert not CdgaEngine(CdgaInstance(linear, 4)).is_minimal()

    def test_unknown_target(self, lambda_uxy):
        engine = CdgaEngine(CdgaInstance(lambda_uxy, 2))
        with pytest.raises(PresentationError):
            engine.indecomposables_homotopy("over-Z")
