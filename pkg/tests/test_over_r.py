import sys
from pathlib import Path

import pytest

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from eqloop.algebra.graded_ring import OVER_R
from eqloop.bar import UNIT, BarConfig, BarWord, MarkedWord, OverRQuotient
from eqloop.exceptions import PresentationError


@pytest.fixture
def quotient(s2_circle):
    return OverRQuotient(BarConfig.symmetric(s2_circle, OVER_R, 6))


class TestQuotientSlices:
    """B̄_k / V against the complex built directly over R"""

    def test_moves_between_non_unit_factors_leave_extra_words(self, quotient):
        raw = quotient.quotient_over_R(3, include_unit_moves=False, length=1)
        words = {quotient.over_k.word_string(w) for w in raw.quotient_words}
        assert raw.dimension == 2
        assert words == {"(1 | x*u | 1)", "(1 | u^2 | 1)"}

    def test_unit_moves_kill_pure_r_slots(self, quotient):
        full = quotient.quotient_over_R(3, length=1)
        assert full.dimension == 1

    @pytest.mark.parametrize("n", range(7))
    def test_dimension_agreement(self, quotient, n):
        quotient_dim, over_r_dim = quotient.dimension_agreement(n)
        assert quotient_dim == over_r_dim

    def test_slices_are_cached(self, quotient):
        assert quotient.quotient_over_R(2) is quotient.quotient_over_R(2)

    def test_projection_matrix_shape(self, quotient):
        projection = quotient.projection_matrix(2)
        assert projection.cols == len(quotient.over_k.bar_basis(2))
        assert projection.rows == len(quotient.over_r.bar_basis(2))


class TestContractingHomotopy:
    """Ds + sD on marked words and on V"""

    @pytest.mark.parametrize("n", range(7))
    def test_homotopy_on_spanning_set(self, quotient, n):
        checked = quotient.check_homotopy(n)
        assert checked == len(quotient.spanning_set(n))

    def test_homotopy_through_degree_eight(self, s2_circle):
        quotient = OverRQuotient(BarConfig.symmetric(s2_circle, OVER_R, 8))
        assert sum(quotient.check_homotopy(n) for n in range(9)) > 0

    @pytest.mark.parametrize("n", range(6))
    def test_v_closed_under_d(self, quotient, n):
        quotient.check_v_closed(n)

    @pytest.mark.parametrize("n", range(6))
    def test_projection_is_chain_map_with_kernel_v(self, quotient, n):
        quotient.check_projection(n)

    def test_insert_is_zero_on_unit_slot(self, quotient):
        word = BarWord(UNIT, (UNIT,), UNIT)
        assert quotient.insert(MarkedWord(word, 0, 0)) == {}

    def test_homotopy_identity_on_v(self, quotient):
        relations = quotient.v_subspace(2)
        assert relations.dim > 0
        v = quotient.over_k.from_vector(2, relations.basis[0])
        assert quotient.homotopy_identity(v) == v

    def test_homotopy_outside_v(self, quotient):
        bar = quotient.over_k
        unit = bar.word_chain(bar.unit_word())
        with pytest.raises(PresentationError) as excinfo:
            quotient.homotopy_s(unit)
        assert excinfo.value.invariant == "in-V"


class TestOverKAgainstOverR:
    """Both complexes compute the same Tor"""

    def test_s2_circle(self, quotient):
        over_k = quotient.over_k.betti_numbers()
        over_r = quotient.over_r.betti_numbers()
        assert over_k == over_r == {n: 1 for n in range(7)}

    def test_s2_circle_to_eight(self, s2_circle):
        quotient = OverRQuotient(BarConfig.symmetric(s2_circle, OVER_R, 8))
        assert quotient.over_k.betti_numbers() == quotient.over_r.betti_numbers()

    def test_point(self, point):
        quotient = OverRQuotient(BarConfig.symmetric(point, OVER_R, 8))
        expected = {n: 1 if n % 2 == 0 else 0 for n in range(9)}
        assert quotient.over_k.betti_numbers() == expected
        assert quotient.over_r.betti_numbers() == expected

    def test_projection_sends_cocycles_to_cocycles(self, quotient):
        for n in range(5):
            for chain in quotient.over_k.representatives(n):
                image = quotient.projection_to_over_r(chain)
                assert quotient.over_r.bar_D(image).is_zero()
