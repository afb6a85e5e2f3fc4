import logging
import random
from itertools import product

import pytest

from symbolic.clifford import (
    VOLUME,
    CliffElem,
    c_xi,
    c_xi_prime,
    cl_mul,
    cl_product,
    cl_trace,
    cl_trace_product,
    e,
    grade,
    indices_mask,
    mask_indices,
    monomial_label,
)
from symbolic.scalars import H1, ONE, RING, XI, XI_PRIME_SQ, XN, ZERO, gauss

GENERATORS = (1, 2, 3, 4, 5)


def _wick_trace(indices) -> int:
    """Spinor trace of e_{i1}...e_{in} by pairing, with <e_a e_b> = -delta_ab."""
    if not indices:
        return 4
    if len(indices) % 2:
        return 0
    first, rest = indices[0], indices[1:]
    total = 0
    for k, other in enumerate(rest):
        if other == first:
            total += (-1) ** k * -1 * _wick_trace(rest[:k] + rest[k + 1 :])
    return total


def _random_element(rng: random.Random) -> CliffElem:
    terms = {}
    for mask in rng.sample(range(VOLUME + 1), 6):
        terms[mask] = RING.ground_new(gauss(rng.randint(-5, 5), rng.randint(-3, 3))) * (H1 if mask % 3 else ONE)
    return CliffElem(terms)


def test_generators_square_to_minus_one() -> None:
    for k in GENERATORS:
        assert e(k) * e(k) == CliffElem.scalar(-1)


def test_generators_anticommute() -> None:
    for a, b in product(GENERATORS, repeat=2):
        if a != b:
            assert e(a) * e(b) == -(e(b) * e(a))


def test_c_xi_squares_to_minus_norm() -> None:
    assert c_xi() * c_xi() == CliffElem.scalar(-(XI_PRIME_SQ + XN**2))
    assert c_xi_prime() * c_xi_prime() == CliffElem.scalar(-XI_PRIME_SQ)


def test_basis_orders_indices_with_sign() -> None:
    assert CliffElem.basis(2, 1) == -CliffElem.basis(1, 2)
    assert indices_mask([3, 1, 3]) == (1, 0b00001)
    assert mask_indices(0b10101) == (1, 3, 5)
    assert grade(VOLUME) == 5


def test_monomial_label() -> None:
    assert monomial_label(0) == "1"
    assert monomial_label(VOLUME) == "e1e2e3e4e5"


@pytest.mark.parametrize("length", range(7))
def test_trace_matches_wick_pairing(length: int) -> None:
    for indices in product(GENERATORS, repeat=length):
        element = cl_product(CliffElem.scalar(1), *(e(k) for k in indices))
        if length == 5 and sorted(indices) == list(GENERATORS):
            # the volume element is traceless
            assert cl_trace(element) == ZERO
            continue
        assert cl_trace(element) == RING.ground_new(_wick_trace(indices))


def test_volume_element_is_traceless_and_logged(caplog) -> None:
    volume = cl_product(*(e(k) for k in GENERATORS))
    assert volume.max_grade() == 5
    with caplog.at_level(logging.WARNING, logger="symbolic.clifford"):
        assert cl_trace(volume.scale(H1)) == ZERO
    assert "Grade-5" in caplog.text


def test_trace_is_cyclic() -> None:
    rng = random.Random(7)
    for _ in range(20):
        a, b = _random_element(rng), _random_element(rng)
        assert cl_trace(cl_mul(a, b)) == cl_trace(cl_mul(b, a))


def test_trace_product_matches_full_product() -> None:
    rng = random.Random(11)
    for _ in range(20):
        a, b = _random_element(rng), _random_element(rng)
        product_ = cl_mul(a, b)
        trace, volume = cl_trace_product(a, b)
        assert trace == product_.part(0) * 4
        assert volume == product_.part(VOLUME)


def test_scalar_multiplication() -> None:
    x = e(1).scale(XI[0])
    assert x * 2 == e(1).scale(XI[0] * 2)
    assert not (x - x)
