"""
Triple Massey products.

Convention: d(y1) = a·b, d(y2) = b·c and the representative is w = y1·c - (-1)^{|a|} a·y2.
The indeterminacy is [a]·H + H·[c], expressed in class coordinates of the degree of w.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, List, Optional, Tuple

from eqloop.algebra.presentation import GradedElement
from eqloop.exceptions import PresentationError, TruncationError
from eqloop.linalg.rational_matrix import Subspace

if TYPE_CHECKING:
    from eqloop.cdga.cdga_engine import CdgaEngine

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MasseyResult:
    defined: bool
    degree: int
    representative: Optional[GradedElement] = None
    class_coordinates: Tuple[Fraction, ...] = ()
    indeterminacy: Optional[Subspace] = None
    contains_zero: bool = False
    lifts: Tuple[Optional[GradedElement], Optional[GradedElement]] = (None, None)
    reason: str = ""

    @property
    def indeterminacy_dim(self) -> int:
        return self.indeterminacy.dim if self.indeterminacy is not None else 0


def _require_cocycle(engine: "CdgaEngine", element: GradedElement, label: str) -> None:
    if not engine.is_cocycle(element):
        raise PresentationError(f"Massey argument {label} is not a cocycle", invariant="cocycle")


def _checked_lift(engine: "CdgaEngine", target: GradedElement, supplied: Optional[GradedElement],
                  label: str) -> Optional[GradedElement]:
    if supplied is None:
        return engine.lift(target)
    if supplied.degree != target.degree - 1 and not supplied.is_zero():
        raise PresentationError(f"Lift {label} has degree {supplied.degree}, expected {target.degree - 1}",
                                invariant="massey-lift")
    if engine.ring.differential(supplied) != target:
        raise PresentationError(f"Supplied lift {label} does not bound its product", invariant="massey-lift")
    return supplied


def massey_triple(engine: "CdgaEngine", a: GradedElement, b: GradedElement, c: GradedElement,
                  lifts: Optional[Tuple[GradedElement, GradedElement]] = None) -> MasseyResult:
    """
    Compute <[a], [b], [c]>.

    Args:
        engine: Engine of the ambient CDGA
        a, b, c: Cocycles representing the classes
        lifts: Optional (y1, y2); each is checked against its product

    Returns:
        MasseyResult; ``defined`` is False when [a][b] or [b][c] is nonzero
    Raises:
        TruncationError: the product lives beyond the engine's truncation
    """
    ring = engine.ring
    degree = a.degree + b.degree + c.degree - 1
    if degree > engine.max_degree:
        raise TruncationError(f"Massey product of degree {degree} exceeds truncation {engine.max_degree}",
                              degree=degree)
    for label, element in (("a", a), ("b", b), ("c", c)):
        _require_cocycle(engine, element, label)

    ab = ring.multiply(a, b)
    bc = ring.multiply(b, c)
    if any(engine.classify(ab)):
        return MasseyResult(defined=False, degree=degree, reason="[a][b] is nonzero in cohomology")
    if any(engine.classify(bc)):
        return MasseyResult(defined=False, degree=degree, reason="[b][c] is nonzero in cohomology")

    supplied = lifts or (None, None)
    y1 = _checked_lift(engine, ab, supplied[0], "y1")
    y2 = _checked_lift(engine, bc, supplied[1], "y2")
    if y1 is None or y2 is None:
        raise TruncationError("No lift found within the truncation", degree=degree)

    sign = -1 if a.degree % 2 else 1
    w = ring.multiply(y1, c) - ring.multiply(a, y2).scale(sign)
    if w.is_zero():
        w = GradedElement.zero(degree)
    coordinates = engine.classify(w)

    spanning: List[List[Fraction]] = []
    for h in engine.representatives(b.degree + c.degree - 1):
        spanning.append(engine.classify(ring.multiply(a, h)))
    for h in engine.representatives(a.degree + b.degree - 1):
        spanning.append(engine.classify(ring.multiply(h, c)))
    betti = engine.slice_cohomology(degree).betti
    indeterminacy = Subspace.span(spanning, betti)
    contains_zero = indeterminacy.contains(coordinates)
    logger.info(f"Massey product in degree {degree}: class {[str(x) for x in coordinates]}, "
                f"indeterminacy dim {indeterminacy.dim}, contains zero: {contains_zero}")
    return MasseyResult(
        defined=True,
        degree=degree,
        representative=w,
        class_coordinates=tuple(coordinates),
        indeterminacy=indeterminacy,
        contains_zero=contains_zero,
        lifts=(y1, y2),
    )
