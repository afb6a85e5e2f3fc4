"""Clifford-valued rational functions of the covariable xi.

A ``RatXi`` is N / (Q^a (xn - i)^b (xn + i)^c) with N a Clifford element with
polynomial coefficients. Before restriction to |xi'| = 1 only Q-powers occur;
afterwards Q = (xn - i)(xn + i) and only the two linear factors remain.
"""

import logging
from functools import lru_cache
from math import comb, factorial
from typing import List, Union

from symbolic.clifford import CliffElem, Scalar
from symbolic.errors import (
    DenominatorError,
    IntegrationError,
    PiPlusUndefinedError,
    RestrictionError,
)
from symbolic.scalars import (
    I_UNIT,
    ONE,
    Q_POLY,
    XI,
    XN,
    XN_MINUS_I,
    XN_PLUS_I,
    Poly,
    gauss,
    sphere_normal_form,
)

logger = logging.getLogger(__name__)

TWO_I = gauss(0, 2)


@lru_cache(maxsize=None)
def _power(base: str, k: int) -> Poly:
    factor = {"Q": Q_POLY, "-": XN_MINUS_I, "+": XN_PLUS_I}[base]
    return factor**k


class RatXi:
    """An exact rational function of xi with a Clifford numerator."""

    __slots__ = ("numerator", "q", "minus", "plus", "restricted")

    def __init__(
        self,
        numerator: CliffElem,
        q: int = 0,
        minus: int = 0,
        plus: int = 0,
        restricted: bool = False,
    ):
        if min(q, minus, plus) < 0:
            raise DenominatorError("negative denominator exponent")
        if not restricted and (minus or plus):
            raise DenominatorError("(xn -+ i) factors require restriction")
        if restricted and q:
            raise DenominatorError("Q factor in a restricted function")
        self.numerator = numerator
        self.q = q
        self.minus = minus
        self.plus = plus
        self.restricted = restricted

    @classmethod
    def zero(cls, restricted: bool = False) -> "RatXi":
        return cls(CliffElem(), restricted=restricted)

    @classmethod
    def of(cls, value: Union[CliffElem, Scalar], q: int = 0) -> "RatXi":
        if not isinstance(value, CliffElem):
            value = CliffElem.scalar(value)
        return cls(value, q=q)

    def __bool__(self) -> bool:
        return bool(self.numerator)

    def __repr__(self) -> str:
        from symbolic.text import render_ratxi

        return f"RatXi({render_ratxi(self)})"

    def _trivial(self) -> bool:
        return not (self.q or self.minus or self.plus)

    def _common_flag(self, other: "RatXi") -> bool:
        if self.restricted == other.restricted:
            return self.restricted
        if self._trivial() or not self:
            return other.restricted
        if other._trivial() or not other:
            return self.restricted
        raise DenominatorError("cannot combine restricted and unrestricted functions")

    def _lifted(self, q: int, minus: int, plus: int) -> CliffElem:
        factor = ONE
        if q > self.q:
            factor *= _power("Q", q - self.q)
        if minus > self.minus:
            factor *= _power("-", minus - self.minus)
        if plus > self.plus:
            factor *= _power("+", plus - self.plus)
        return self.numerator if factor == ONE else self.numerator.scale(factor)

    def __add__(self, other: "RatXi") -> "RatXi":
        restricted = self._common_flag(other)
        if not other:
            return self
        if not self:
            return other
        q = max(self.q, other.q)
        minus = max(self.minus, other.minus)
        plus = max(self.plus, other.plus)
        numerator = self._lifted(q, minus, plus) + other._lifted(q, minus, plus)
        return RatXi(numerator, q, minus, plus, restricted).reduced()

    def __neg__(self) -> "RatXi":
        return RatXi(-self.numerator, self.q, self.minus, self.plus, self.restricted)

    def __sub__(self, other: "RatXi") -> "RatXi":
        return self + (-other)

    def __mul__(self, other: Union["RatXi", CliffElem, Scalar]) -> "RatXi":
        if isinstance(other, RatXi):
            restricted = self._common_flag(other)
            return RatXi(
                self.numerator * other.numerator,
                self.q + other.q,
                self.minus + other.minus,
                self.plus + other.plus,
                restricted,
            ).reduced()
        return RatXi(
            self.numerator * other, self.q, self.minus, self.plus, self.restricted
        )

    def __rmul__(self, other: Union[CliffElem, Scalar]) -> "RatXi":
        if isinstance(other, CliffElem):
            return RatXi(
                other * self.numerator, self.q, self.minus, self.plus, self.restricted
            )
        return self * other

    def xn_degree(self) -> int:
        return max((c.degree(XN) for _, c in self.numerator), default=-1)

    def denominator_degree(self) -> int:
        return 2 * self.q + self.minus + self.plus

    def reduced(self) -> "RatXi":
        """Cancels common (xn -+ i) factors of a restricted function."""
        if not self.restricted or not self.numerator:
            if not self.numerator:
                return RatXi.zero(self.restricted)
            return self
        numerator, minus, plus = self.numerator, self.minus, self.plus
        while minus and _divisible(numerator, I_UNIT):
            numerator = numerator.map_coeffs(lambda c: c.exquo(XN_MINUS_I))
            minus -= 1
        while plus and _divisible(numerator, -I_UNIT):
            numerator = numerator.map_coeffs(lambda c: c.exquo(XN_PLUS_I))
            plus -= 1
        return RatXi(numerator, 0, minus, plus, True)

    def equals(self, other: "RatXi") -> bool:
        return not (self - other)

    def equals_on_sphere(self, other: "RatXi") -> bool:
        """Equality modulo |xi'|^2 = 1 once both sides are restricted."""
        a = self if self.restricted else restrict_to_unit_sphere(self)
        b = other if other.restricted else restrict_to_unit_sphere(other)
        diff = a - b
        return all(not sphere_normal_form(c) for _, c in diff.numerator)

    def scalar_part(self) -> Poly:
        return self.numerator.part(0)


def _divisible(numerator: CliffElem, root) -> bool:
    return all(not c.subs(XN, root) for _, c in numerator)


def dxi(f: RatXi, direction: Union[int, str], order: int = 1) -> RatXi:
    """
    Differentiates ``f`` ``order`` times in xi_direction.

    Args:
        f (RatXi): Function to differentiate.
        direction (Union[int, str]): 1..4 for a tangential covariable, "n" or 5
            for the normal covariable.
        order (int): Number of derivatives.

    Returns:
        RatXi: The exact quotient-rule derivative.
    """
    normal = direction in ("n", 5)
    if not normal and direction not in (1, 2, 3, 4):
        raise RestrictionError(f"unknown derivative direction: {direction}")
    if not normal and f.restricted:
        raise RestrictionError("restricted before ξ′-derivative")
    gen = XN if normal else XI[direction - 1]
    for _ in range(order):
        f = _dxi_once(f, gen)
    return f


def _dxi_once(f: RatXi, gen: Poly) -> RatXi:
    if not f:
        return f
    d_numerator = f.numerator.map_coeffs(lambda c: c.diff(gen))
    if f.restricted:
        factors = [(f.minus, XN_MINUS_I, ONE), (f.plus, XN_PLUS_I, ONE)]
    else:
        factors = [(f.q, Q_POLY, Q_POLY.diff(gen))]
    factors = [(n, g, dg) for n, g, dg in factors if n]
    if not factors:
        return RatXi(d_numerator, f.q, f.minus, f.plus, f.restricted)

    full = ONE
    for _, g, _ in factors:
        full *= g
    numerator = d_numerator.scale(full)
    for n, g, dg in factors:
        if dg:
            numerator = numerator - f.numerator.scale(dg * n * full.exquo(g))
    bump = lambda n: n + 1 if n else 0
    return RatXi(
        numerator, bump(f.q), bump(f.minus), bump(f.plus), f.restricted
    ).reduced()


def restrict_to_unit_sphere(f: RatXi) -> RatXi:
    """Sets |xi'| = 1 in the denominator: Q^a -> (xn - i)^a (xn + i)^a."""
    if f.restricted:
        raise RestrictionError("function is already restricted to |xi'| = 1")
    return RatXi(f.numerator, 0, f.q, f.q, True).reduced()


def _taylor_at_i(f: RatXi, order: int) -> List[CliffElem]:
    """First ``order`` Taylor coefficients in t = xn - i of N / (xn + i)^c."""
    c = f.plus
    if c == 0:
        series = [gauss(1)] + [gauss(0)] * (order - 1)
    else:
        series = [
            gauss((-1) ** m * comb(c + m - 1, m)) * TWO_I ** (-c - m) for m in range(order)
        ]
    shifted = []
    for k in range(order):
        scale = gauss(1) / factorial(k)
        shifted.append(
            f.numerator.map_coeffs(
                lambda p, k=k: _nth_derivative(p, k).subs(XN, I_UNIT) * scale
            )
        )
    coeffs = []
    for k in range(order):
        total = CliffElem()
        for m in range(k + 1):
            total = total + shifted[k - m].scale(series[m])
        coeffs.append(total)
    return coeffs


def _nth_derivative(p: Poly, k: int) -> Poly:
    for _ in range(k):
        p = p.diff(XN)
    return p


def pi_plus(f: RatXi) -> RatXi:
    """
    Projects a restricted proper function onto its H+ part.

    The result is the principal part of the partial-fraction decomposition at
    xn = i, found from the Taylor expansion of f * (xn - i)^b at xn = i.
    """
    if not f.restricted:
        raise RestrictionError("π⁺ requires a function restricted to |xi'| = 1")
    f = f.reduced()
    if not f:
        return f
    if f.xn_degree() >= f.denominator_degree():
        raise PiPlusUndefinedError("π⁺ undefined: no decay")
    if not f.minus:
        return RatXi.zero(True)
    numerator = CliffElem()
    for k, coeff in enumerate(_taylor_at_i(f, f.minus)):
        numerator = numerator + coeff.scale(_power("-", k))
    return RatXi(numerator, 0, f.minus, 0, True).reduced()


def pi_minus(f: RatXi) -> RatXi:
    return f - pi_plus(f)


def integrate_xi_n(f: RatXi) -> CliffElem:
    """
    Integrates a restricted function over the real xn line.

    Returns:
        CliffElem: The integral in units of pi, i.e. 2i times the residue at
        xn = i.
    """
    if not f.restricted:
        raise IntegrationError("xn-integration requires a restricted function")
    f = f.reduced()
    if not f:
        return CliffElem()
    if f.xn_degree() > f.denominator_degree() - 2:
        raise IntegrationError("integrand does not decay fast enough in xn")
    if not f.minus:
        return CliffElem()
    residue = _taylor_at_i(f, f.minus)[-1]
    return residue.scale(TWO_I)
