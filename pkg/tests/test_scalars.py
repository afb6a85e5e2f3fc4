from fractions import Fraction

import pytest

from symbolic.errors import AlgebraError, CyclicSubstitutionError
from symbolic.scalars import (
    H1,
    H2,
    ONE,
    RING,
    SB,
    XI,
    XI_PRIME_SQ,
    XN,
    ZERO,
    const,
    evaluate_at,
    gauss,
    gauss_parts,
    generator,
    poly_arith,
    poly_substitute,
    sphere_normal_form,
    vanishes_on_sphere,
    xi_degree,
)


def test_gauss_parts_are_reduced_fractions() -> None:
    assert gauss_parts(gauss("6/8", "-2/4")) == (Fraction(3, 4), Fraction(-1, 2))
    assert gauss_parts(gauss(0, 1) * gauss(0, 1)) == (Fraction(-1), Fraction(0))


def test_exact_arithmetic_has_no_rounding() -> None:
    third = gauss("1/3")
    assert third + third + third == gauss(1)
    assert const(gauss("1/7")) * 7 == ONE


@pytest.mark.parametrize(
    "op, expected",
    [
        ("add", H1 + H2),
        ("sub", H1 - H2),
        ("mul", H1 * H2),
    ],
)
def test_poly_arith(op: str, expected) -> None:
    assert poly_arith(H1, H2, op) == expected


def test_poly_arith_rejects_unknown_operation() -> None:
    with pytest.raises(AlgebraError):
        poly_arith(H1, H2, "div")


def test_generator_lookup() -> None:
    assert generator("sB") == SB
    with pytest.raises(AlgebraError):
        generator("s_boundary")


def test_poly_substitute_expands() -> None:
    p = H2 * H1 + SB
    assert poly_substitute(p, H2, H1**2 + ONE) == H1**3 + H1 + SB


def test_poly_substitute_rejects_cyclic_replacement() -> None:
    with pytest.raises(CyclicSubstitutionError):
        poly_substitute(H2, H2, H2 + H1)


def test_poly_substitute_needs_a_generator() -> None:
    with pytest.raises(AlgebraError):
        poly_substitute(H2, H1 + H2, ONE)


def test_xi_degree_counts_covariables_only() -> None:
    assert xi_degree(H1**3 * XI[0] ** 2 * XN) == 3
    assert xi_degree(ZERO) == 0


def test_sphere_normal_form_eliminates_even_x4_powers() -> None:
    x1, x2, x3, x4 = XI
    assert sphere_normal_form(x4**2) == ONE - x1**2 - x2**2 - x3**2
    assert sphere_normal_form(x4**3) == (ONE - x1**2 - x2**2 - x3**2) * x4
    assert sphere_normal_form(x4 * H1) == x4 * H1


def test_unit_sphere_relation_vanishes() -> None:
    assert vanishes_on_sphere(XI_PRIME_SQ - ONE)
    assert vanishes_on_sphere((XI_PRIME_SQ - ONE) * H1 * XN)
    assert not vanishes_on_sphere(XI_PRIME_SQ)


def test_evaluate_at_keeps_the_ring() -> None:
    p = H1**2 + H2 * XN
    value = evaluate_at(p, {H1: gauss(2), H2: gauss(0, 1)})
    assert value.ring == RING
    assert value == const(4) + XN * gauss(0, 1)
