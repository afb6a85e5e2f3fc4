"""Exact monomial integrals over the unit 3-sphere."""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

from sympy import Rational, factorial2, gamma, pi, simplify

from symbolic.curvature import contract_curvature
from symbolic.errors import IntegrationError
from symbolic.scalars import RING, XI, XN, ZERO, GaussRat, Poly, gauss

logger = logging.getLogger(__name__)

_XI_SLOTS = [RING.index(x) for x in XI]
_XN_SLOT = RING.index(XN)


@dataclass(frozen=True)
class SphereValue:
    """A sphere integral: ``value`` times pi**pi_power."""

    value: Poly
    pi_power: int = 2


@lru_cache(maxsize=None)
def sphere_moment(exponents: Tuple[int, int, int, int]) -> GaussRat:
    """
    Integral of x1^b1 x2^b2 x3^b3 x4^b4 over S^3, in units of pi^2.

    Uses 2 prod Gamma((b_i + 1)/2) / Gamma((sum b_i + 4)/2); odd exponents
    integrate to zero.
    """
    if any(b % 2 for b in exponents):
        return gauss(0)
    value = 2 / gamma(Rational(sum(exponents) + 4, 2))
    for b in exponents:
        value *= gamma(Rational(b + 1, 2))
    return gauss(simplify(value / pi**2))


def integrate_sphere(p: Poly) -> SphereValue:
    """
    Integrates a polynomial in xi' over |xi'| = 1 and contracts curvature.

    Args:
        p (Poly): Polynomial free of xn.

    Returns:
        SphereValue: Value in units of pi^2 over {h1, h2, sB}.
    """
    raw = ZERO
    for monom, coeff in p.iterterms():
        if monom[_XN_SLOT]:
            raise IntegrationError("sphere integrand still depends on xn")
        moment = sphere_moment(tuple(monom[i] for i in _XI_SLOTS))
        if moment:
            rest = list(monom)
            for i in _XI_SLOTS:
                rest[i] = 0
            raw += RING({tuple(rest): coeff * moment})
    return SphereValue(contract_curvature(raw))


def moment_conventions() -> Dict[str, Dict[str, GaussRat]]:
    """
    Pairing constants of the degree-2 and degree-4 moments, in units of pi^2.

    "gamma" is the exact moment formula; "shorthand" reads the pairing
    normalizations 1/4 and 1/(3 * 2^3) as fractions of pi^2.
    """
    shorthand = {
        "degree2": gauss(Rational(1, 4)),
        "degree4": gauss(Rational(1, 3 * 2**3)),
    }
    exact = {
        "degree2": sphere_moment((2, 0, 0, 0)),
        "degree4": sphere_moment((2, 2, 0, 0)),
    }
    for key in exact:
        if exact[key] != shorthand[key]:
            logger.warning(
                f"Moment constant {key}: exact {exact[key]} vs shorthand {shorthand[key]}"
            )
    return {"gamma": exact, "shorthand": shorthand}


def double_factorial_moment(exponents: Tuple[int, int, int, int]) -> Rational:
    """Closed form 2 prod (b_i - 1)!! / (2^(B/2) (B/2 + 1)!) used as a cross-check."""
    if any(b % 2 for b in exponents):
        return Rational(0)
    half = sum(exponents) // 2
    value = Rational(2, 2**half)
    for b in exponents:
        value *= factorial2(b - 1)
    value /= factorial2(2 * half + 2) / 2 ** (half + 1)
    return value
