"""
Free graded-commutative monomials and polynomials.

A monomial is a tuple of exponents in declared generator order; exponents of odd-degree
generators are 0 or 1. The canonical product order is ascending generator index, so the
generator declared first is written first and is the largest in the monomial order.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from eqloop.exceptions import PresentationError

Monomial = Tuple[int, ...]
FreePolynomial = Dict[Monomial, Fraction]


def unit_monomial(count: int) -> Monomial:
    return (0,) * count


def generator_monomial(index: int, count: int) -> Monomial:
    exponents = [0] * count
    exponents[index] = 1
    return tuple(exponents)


def monomial_degree(monomial: Monomial, degrees: Sequence[int]) -> int:
    return sum(e * d for e, d in zip(monomial, degrees))


@lru_cache(maxsize=None)
def _free_monomials(degrees: Tuple[int, ...], n: int, start: int) -> Tuple[Monomial, ...]:
    if start == len(degrees):
        return ((),) if n == 0 else ()
    degree = degrees[start]
    top = n // degree
    if degree % 2:
        top = min(top, 1)
    result = []
    for exponent in range(top, -1, -1):
        for tail in _free_monomials(degrees, n - exponent * degree, start + 1):
            result.append((exponent,) + tail)
    return tuple(result)


def free_monomials(degrees: Sequence[int], n: int) -> List[Monomial]:
    """All free graded-commutative monomials of degree ``n``, in descending (degree-lex) order"""
    if n < 0:
        return []
    return list(_free_monomials(tuple(degrees), n, 0))


def multiply_monomials(left: Monomial, right: Monomial, degrees: Sequence[int]) -> Tuple[int, Monomial]:
    """
    Product of two monomials in canonical order.

    Returns:
        (sign, monomial) with sign in {-1, 0, 1}; sign 0 when an odd generator repeats
    """
    sign_parity = 0
    odd_left_after = 0
    # odd generators of ``right`` move left past the odd generators of ``left`` with larger index
    for index in range(len(degrees) - 1, -1, -1):
        if degrees[index] % 2:
            if right[index] and left[index]:
                return 0, ()
            if right[index]:
                sign_parity += odd_left_after
            if left[index]:
                odd_left_after += 1
    product = tuple(a + b for a, b in zip(left, right))
    return (-1 if sign_parity % 2 else 1), product


def multiply_polynomials(left: Mapping[Monomial, Fraction], right: Mapping[Monomial, Fraction],
                         degrees: Sequence[int]) -> FreePolynomial:
    result: FreePolynomial = {}
    for m1, c1 in left.items():
        for m2, c2 in right.items():
            sign, product = multiply_monomials(m1, m2, degrees)
            if sign:
                value = result.get(product, Fraction(0)) + sign * c1 * c2
                if value:
                    result[product] = value
                else:
                    result.pop(product, None)
    return result


def power_polynomial(base: Mapping[Monomial, Fraction], exponent: int, degrees: Sequence[int]) -> FreePolynomial:
    result: FreePolynomial = {unit_monomial(len(degrees)): Fraction(1)}
    for _ in range(exponent):
        result = multiply_polynomials(result, base, degrees)
    return result


def add_polynomials(target: FreePolynomial, other: Mapping[Monomial, Fraction],
                    scale: Fraction = Fraction(1)) -> FreePolynomial:
    """In-place ``target += scale * other``"""
    for monomial, coefficient in other.items():
        value = target.get(monomial, Fraction(0)) + scale * coefficient
        if value:
            target[monomial] = value
        else:
            target.pop(monomial, None)
    return target


def polynomial_degree(poly: Mapping[Monomial, Fraction], degrees: Sequence[int]) -> Optional[int]:
    """
    The common degree of all terms, or None for the zero polynomial.

    Raises:
        PresentationError: if the terms have different degrees
    """
    found = {monomial_degree(m, degrees) for m, c in poly.items() if c}
    if not found:
        return None
    if len(found) > 1:
        raise PresentationError(f"Expression mixes degrees {sorted(found)}", invariant="homogeneity")
    return found.pop()


def substitute(poly: Mapping[Monomial, Fraction], images: Sequence[Mapping[Monomial, Fraction]],
               target_degrees: Sequence[int]) -> FreePolynomial:
    """Apply the algebra map sending generator ``i`` to ``images[i]`` (a polynomial in the target)"""
    result: FreePolynomial = {}
    for monomial, coefficient in poly.items():
        term: FreePolynomial = {unit_monomial(len(target_degrees)): Fraction(coefficient)}
        for index, exponent in enumerate(monomial):
            if exponent:
                term = multiply_polynomials(term, power_polynomial(images[index], exponent, target_degrees),
                                            target_degrees)
                if not term:
                    break
        add_polynomials(result, term)
    return result


def free_differential(poly: Mapping[Monomial, Fraction], images: Sequence[Mapping[Monomial, Fraction]],
                      degrees: Sequence[int]) -> FreePolynomial:
    """
    Extend generator values of a differential by the graded Leibniz rule.

    For a monomial P·g^e·S (P the generators before g, S those after) the g-term is
    (-1)^{deg P} · P · d(g^e) · S, with d(g^e) = e·g^{e-1}·dg for even g.
    """
    count = len(degrees)
    result: FreePolynomial = {}
    for monomial, coefficient in poly.items():
        prefix_degree = 0
        for index, exponent in enumerate(monomial):
            if exponent and images[index]:
                prefix = monomial[:index] + (0,) * (count - index)
                lowered = tuple(e - 1 if i == index else 0 for i, e in enumerate(monomial))
                suffix = (0,) * (index + 1) + monomial[index + 1:]
                scale = Fraction(coefficient * exponent)
                if prefix_degree % 2:
                    scale = -scale
                term = {prefix: scale}
                term = multiply_polynomials(term, {lowered: Fraction(1)}, degrees)
                term = multiply_polynomials(term, images[index], degrees)
                term = multiply_polynomials(term, {suffix: Fraction(1)}, degrees)
                add_polynomials(result, term)
            prefix_degree += exponent * degrees[index]
    return result


def monomial_to_string(monomial: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, exponent in zip(names, monomial):
        if exponent == 1:
            parts.append(name)
        elif exponent > 1:
            parts.append(f"{name}^{exponent}")
    return "*".join(parts) if parts else "1"


def polynomial_to_string(poly: Mapping[Monomial, Fraction], names: Sequence[str]) -> str:
    """Render terms in descending monomial order, e.g. ``x^2 - u^2`` or ``-1/2*x*u``"""
    if not poly:
        return "0"
    pieces = []
    for monomial in sorted(poly, reverse=True):
        coefficient = Fraction(poly[monomial])
        if not coefficient:
            continue
        negative = coefficient < 0
        magnitude = -coefficient if negative else coefficient
        body = monomial_to_string(monomial, names)
        if body == "1":
            text = str(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{magnitude}*{body}"
        if not pieces:
            pieces.append(f"-{text}" if negative else text)
        else:
            pieces.append(f"- {text}" if negative else f"+ {text}")
    return " ".join(pieces) if pieces else "0"
