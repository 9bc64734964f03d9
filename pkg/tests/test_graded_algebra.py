import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from eqloop.algebra.expressions import parse_expression
from eqloop.algebra.graded_ring import OVER_K, OVER_R, GradedRing
from eqloop.algebra.monomials import free_monomials, multiply_monomials, polynomial_to_string
from eqloop.algebra.presentation import AlgebraPresentation, Generator, GradedElement
from eqloop.exceptions import HypothesisError, InvariantError, ParseError, PresentationError
from eqloop.extractors.presentation_extractor import parse_presentation


class TestMonomials:
    """Free graded-commutative monomials"""

    def test_free_monomials_descending(self):
        # x and u of degree 2: x^2 > x*u > u^2
        assert free_monomials((2, 2), 4) == [(2, 0), (1, 1), (0, 2)]

    def test_odd_exponent_bounded(self):
        assert free_monomials((1,), 2) == []

    def test_odd_square_vanishes(self):
        sign, _ = multiply_monomials((1, 0), (1, 0), (1, 3))
        assert sign == 0

    def test_odd_generators_anticommute(self):
        sign, product = multiply_monomials((0, 1), (1, 0), (1, 3))
        assert (sign, product) == (-1, (1, 1))

    def test_polynomial_to_string(self):
        poly = {(2, 0): Fraction(1), (0, 2): Fraction(-1)}
        assert polynomial_to_string(poly, ("x", "u")) == "x^2 - u^2"


class TestExpressions:
    @pytest.mark.parametrize("text, expected", [
        ("x^2 - u^2", {(2, 0): Fraction(1), (0, 2): Fraction(-1)}),
        ("1/2*x*u", {(1, 1): Fraction(1, 2)}),
        ("-(x + u)", {(1, 0): Fraction(-1), (0, 1): Fraction(-1)}),
        ("(x + u)^2 - 2*x*u", {(2, 0): Fraction(1), (0, 2): Fraction(1)}),
    ])
    def test_parse(self, text, expected):
        assert parse_expression(text, ("x", "u"), (2, 2)) == expected

    def test_juxtaposition_rejected(self):
        with pytest.raises(ParseError):
            parse_expression("x u", ("x", "u"), (2, 2))

    def test_undeclared_name(self):
        with pytest.raises(ParseError) as excinfo:
            parse_expression("x + y", ("x", "u"), (2, 2), line=3)
        assert excinfo.value.line == 3
        assert excinfo.value.column == 5


class TestGradedRing:
    """Normal forms, products and augmentation of H = k[x,u]/(x² - u²)"""

    @pytest.fixture
    def ring(self, s2_circle):
        return GradedRing(s2_circle)

    def test_dimensions(self, ring):
        assert [ring.dimension(n) for n in range(7)] == [1, 0, 2, 0, 2, 0, 2]

    def test_normal_form_uses_relation(self, ring):
        assert ring.element("x^2") == ring.element("u^2")
        assert ring.describe_basis(4) == ["x*u", "u^2"]

    def test_multiply(self, ring):
        product = ring.multiply(ring.element("x"), ring.element("x*u"))
        assert product == ring.element("u^3")

    def test_augmentation(self, ring):
        assert ring.augment(ring.element("x")) == ring.r_ring.element("-u")
        assert ring.augment(ring.element("x + u")).is_zero()

    def test_augmentation_ideal_generator(self, ring):
        generators = ring.r_module_generators(2)
        assert len(generators) == 1
        assert generators[0] == ring.element("x + u")
        # u*(x + u) is decomposable over R
        assert ring.r_module_generators(4) == []

    def test_kernel_is_r_free(self, ring):
        ring.check_r_free(8)

    def test_expand_over_r(self, ring):
        ((r_monomial, key, coefficient),) = ring.expand_over_r(ring.element("x*u + u^2"))
        assert r_monomial == (1,)
        assert key == (2, 0)
        assert coefficient == 1

    def test_augmentation_to_k(self, ring):
        kernel = ring.augmentation_ideal(2, OVER_K)
        assert kernel.dim == 2
        assert ring.augmentation_ideal(2, OVER_R).dim == 1

    def test_r_subalgebra(self, s2_circle):
        r = s2_circle.r_subalgebra()
        assert r.generator_names == ("u",)
        assert GradedRing(r).is_polynomial_r


class TestGradedCommutativity:
    @pytest.fixture
    def ring(self):
        return GradedRing(parse_presentation("generator a degree 1\ngenerator b degree 3\ngenerator c degree 2\n"))

    def test_odd_anticommute(self, ring):
        assert ring.element("b*a") == -ring.element("a*b")

    def test_even_commutes(self, ring):
        assert ring.element("c*a") == ring.element("a*c")

    def test_square_of_odd_is_zero(self, ring):
        assert ring.element("a*a").is_zero()


class TestDifferential:
    def test_leibniz(self, lambda_uxy):
        ring = GradedRing(lambda_uxy)
        assert ring.differential(ring.generator("y")) == ring.element("u*x")
        assert ring.differential(ring.element("y^2")) == ring.element("2*u*x*y")

    def test_d_squared_checked(self):
        text = "generator a degree 1\ngenerator b degree 2\ngenerator c degree 3\n" \
               "differential a -> b\ndifferential b -> c\n"
        with pytest.raises(InvariantError):
            parse_presentation(text)


class TestPresentationValidation:
    """Semantic violations name the invariant"""

    @pytest.mark.parametrize("text, invariant", [
        ("generator x degree 2\ngenerator u degree 2\nrelation x^2 - u\n", "homogeneity"),
        ("generator t degree 1\nrbase t\n", "r-even"),
        ("generator u degree 2\nrbase u\nrelation u^2\n", "r-free"),
        ("generator x degree 2\ngenerator u degree 2\nrbase u\nrelation x^2 - u^2\naugment x -> 2*u\n",
         "augmentation-well-defined"),
        ("generator x degree 2\ngenerator u degree 2\nrbase u\naugment x -> x\n", "augmentation-into-R"),
        ("generator x degree 2\ngenerator y degree 2\ndifferential y -> x\n", "differential-degree"),
        ("generator x degree 0\n", "positive-degree"),
    ])
    def test_violation(self, text, invariant):
        with pytest.raises(PresentationError) as excinfo:
            parse_presentation(text)
        assert excinfo.value.invariant == invariant

    def test_freeness_failure(self):
        # ker ε = (x) over k[u] with x*u = 0 is torsion, not free
        text = "generator x degree 2\ngenerator u degree 2\nrbase u\nrelation x*u\n"
        ring = GradedRing(parse_presentation(text))
        with pytest.raises(HypothesisError):
            ring.check_r_free(4)

    def test_generators_are_positive(self):
        with pytest.raises(PresentationError):
            AlgebraPresentation("A", (Generator("a", -1),))

    def test_element_degree_mixing(self):
        with pytest.raises(PresentationError):
            GradedElement(2, {(1,): Fraction(1)}) + GradedElement(4, {(2,): Fraction(1)})

    def test_reorder_needs_the_declared_generators(self, s2_circle):
        with pytest.raises(PresentationError) as excinfo:
            s2_circle.with_generator_order(("x", "v"))
        assert excinfo.value.invariant == "declared-names"

    def test_reorder_keeps_the_algebra(self, s2_circle):
        reordered = s2_circle.with_generator_order(("u", "x"))
        assert reordered.generator_names == ("u", "x")
        ring = GradedRing(reordered)
        assert [ring.dimension(n) for n in range(7)] == [1, 0, 2, 0, 2, 0, 2]
        assert ring.element("x^2") == ring.element("u^2")
        assert ring.augment(ring.element("x")) == ring.r_ring.element("-u")


def random_element(ring, rng, degree):
    vector = {}
    for i in range(ring.dimension(degree)):
        value = rng.randint(-2, 2)
        if value:
            vector[i] = Fraction(value)
    return ring.from_vector(degree, vector)


class TestRandomizedRingLaws:
    """Associativity, graded commutativity and multiplicativity of ε on seeded random elements"""

    MIXED = "generator a degree 1\ngenerator b degree 3\ngenerator c degree 2\nrelation c^2 - a*b\n"

    @pytest.fixture
    def mixed(self):
        return GradedRing(parse_presentation(self.MIXED))

    @pytest.mark.parametrize("seed", range(6))
    def test_associative(self, mixed, seed):
        rng = random.Random(seed)
        a, b, c = (random_element(mixed, rng, rng.randint(1, 3)) for _ in range(3))
        assert mixed.multiply(mixed.multiply(a, b), c) == mixed.multiply(a, mixed.multiply(b, c))

    @pytest.mark.parametrize("seed", range(6))
    def test_graded_commutative(self, mixed, seed):
        rng = random.Random(seed)
        a = random_element(mixed, rng, rng.randint(1, 4))
        b = random_element(mixed, rng, rng.randint(1, 4))
        swapped = mixed.multiply(b, a)
        if a.degree % 2 and b.degree % 2:
            swapped = -swapped
        assert mixed.multiply(a, b) == swapped

    @pytest.mark.parametrize("seed", range(6))
    def test_augmentation_is_multiplicative(self, s2_circle, seed):
        ring = GradedRing(s2_circle)
        rng = random.Random(seed)
        a = random_element(ring, rng, 2 * rng.randint(0, 2))
        b = random_element(ring, rng, 2 * rng.randint(1, 2))
        assert ring.augment(ring.multiply(a, b)) == ring.r_ring.multiply(ring.augment(a), ring.augment(b))


class TestRelationsShrinkDegrees:
    """Adding a relation never enlarges a degree basis"""

    FREE = "generator a degree 2\ngenerator b degree 2\ngenerator c degree 3\n"
    RELATIONS = ["relation a*b\n", "relation a^2 - b^2\n", "relation a*c\n"]

    def test_dimensions_non_increasing(self):
        text = self.FREE
        previous = GradedRing(parse_presentation(text))
        for relation in self.RELATIONS:
            text += relation
            current = GradedRing(parse_presentation(text))
            for n in range(9):
                assert len(current.degree_basis(n)) <= len(previous.degree_basis(n)), (relation, n)
            previous = current
        assert len(previous.degree_basis(4)) < len(GradedRing(parse_presentation(self.FREE)).degree_basis(4))
