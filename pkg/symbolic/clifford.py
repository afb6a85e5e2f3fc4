"""Cl(5) with e_k^2 = -1 acting on rank-4 spinors.

Basis monomials are bitmasks over e1..e5 (bit k-1 for e_k, e5 = c(dx_n)).
Coefficients are ring polynomials.
"""

import logging
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

from symbolic.config import DEFAULT_CONFIG
from symbolic.scalars import RING, XI, XN, ZERO, GaussRat, Poly

logger = logging.getLogger(__name__)

Scalar = Union[Poly, GaussRat, int]

VOLUME = (1 << DEFAULT_CONFIG.clifford_dim) - 1


def _blade_sign(a: int, b: int) -> int:
    swaps = 0
    x = a >> 1
    while x:
        swaps += bin(x & b).count("1")
        x >>= 1
    sign = -1 if swaps & 1 else 1
    # each shared generator squares to -1
    if bin(a & b).count("1") & 1:
        sign = -sign
    return sign


_SIGNS: List[List[int]] = [
    [_blade_sign(a, b) for b in range(VOLUME + 1)] for a in range(VOLUME + 1)
]


def mask_indices(mask: int) -> Tuple[int, ...]:
    return tuple(k + 1 for k in range(DEFAULT_CONFIG.clifford_dim) if mask >> k & 1)


def indices_mask(indices: Iterable[int]) -> Tuple[int, int]:
    """Multiplies out e_{i1} e_{i2} ... and returns (sign, mask)."""
    sign, mask = 1, 0
    for i in indices:
        bit = 1 << (i - 1)
        sign *= _SIGNS[mask][bit]
        mask ^= bit
    return sign, mask


def grade(mask: int) -> int:
    return bin(mask).count("1")


def monomial_label(mask: int) -> str:
    return "".join(f"e{k}" for k in mask_indices(mask)) or "1"


class CliffElem:
    """An element sum_m c_m e_m of Cl(5) with polynomial coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[int, Poly] = None):
        self.terms: Dict[int, Poly] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def scalar(cls, c: Scalar) -> "CliffElem":
        return cls({0: RING.ground_new(c) if not isinstance(c, Poly) else c})

    @classmethod
    def basis(cls, *indices: int) -> "CliffElem":
        sign, mask = indices_mask(indices)
        return cls({mask: RING.ground_new(sign)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[Tuple[int, Poly]]:
        return iter(sorted(self.terms.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CliffElem):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self) -> str:
        return f"CliffElem({dict(self)!r})"

    def __neg__(self) -> "CliffElem":
        return CliffElem({m: -c for m, c in self.terms.items()})

    def __add__(self, other: "CliffElem") -> "CliffElem":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, ZERO) + c
        return CliffElem(terms)

    def __sub__(self, other: "CliffElem") -> "CliffElem":
        return self + (-other)

    def __mul__(self, other: Union["CliffElem", Scalar]) -> "CliffElem":
        if isinstance(other, CliffElem):
            return cl_mul(self, other)
        if isinstance(other, (Poly, GaussRat, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: Scalar) -> "CliffElem":
        if isinstance(other, (Poly, GaussRat, int)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Scalar) -> "CliffElem":
        return CliffElem({m: v * c for m, v in self.terms.items()})

    def map_coeffs(self, fn) -> "CliffElem":
        return CliffElem({m: fn(c) for m, c in self.terms.items()})

    def part(self, mask: int) -> Poly:
        return self.terms.get(mask, ZERO)

    def max_grade(self) -> int:
        return max((grade(m) for m in self.terms), default=0)


def cl_mul(a: CliffElem, b: CliffElem) -> CliffElem:
    """Clifford product of two elements."""
    terms: Dict[int, Poly] = {}
    for ma, ca in a.terms.items():
        row = _SIGNS[ma]
        for mb, cb in b.terms.items():
            m = ma ^ mb
            v = ca * cb
            if row[mb] < 0:
                v = -v
            terms[m] = terms[m] + v if m in terms else v
    return CliffElem(terms)


def cl_product(*factors: CliffElem) -> CliffElem:
    result = factors[0]
    for f in factors[1:]:
        result = cl_mul(result, f)
    return result


def cl_trace(a: CliffElem) -> Poly:
    """
    Spinor trace: rank times the coefficient of the identity.

    Every positive-grade monomial, the volume element e1...e5 included, is
    traceless.
    """
    volume = a.part(VOLUME)
    if volume:
        logger.warning(f"Grade-5 term reached a trace and was discarded: {volume}")
    return a.part(0) * DEFAULT_CONFIG.spinor_rank


def cl_trace_product(a: CliffElem, b: CliffElem) -> Tuple[Poly, Poly]:
    """
    Returns tr(ab) without forming the full product, plus the e1...e5 part of ab.
    """
    scalar = ZERO
    volume = ZERO
    for ma, ca in a.terms.items():
        cb = b.terms.get(ma)
        if cb is not None:
            v = ca * cb
            scalar += v if _SIGNS[ma][ma] > 0 else -v
        cv = b.terms.get(ma ^ VOLUME)
        if cv is not None:
            v = ca * cv
            volume += v if _SIGNS[ma][ma ^ VOLUME] > 0 else -v
    return scalar * DEFAULT_CONFIG.spinor_rank, volume


def cl_from_vector(coeffs: Sequence[Scalar]) -> CliffElem:
    """Builds sum_k coeffs[k] e_{k+1}."""
    terms = {}
    for k, c in enumerate(coeffs):
        terms[1 << k] = c if isinstance(c, Poly) else RING.ground_new(c)
    return CliffElem(terms)


def e(k: int) -> CliffElem:
    return CliffElem.basis(k)


def c_xi_prime() -> CliffElem:
    """c(xi') = sum_{k<=4} xi_k e_k."""
    return cl_from_vector(list(XI) + [ZERO])


def c_xi() -> CliffElem:
    """c(xi) = c(xi') + xi_n e5."""
    return cl_from_vector(list(XI) + [XN])
