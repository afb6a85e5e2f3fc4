"""Exact scalar field and the polynomial ring every symbolic quantity lives in.

Coefficients are Gaussian rationals (``QQ_I``); polynomials are sparse
``PolyElement`` values over a single ring whose generators are the four
tangential covariables, the normal covariable, the warping parameters, the
scalar curvatures and the 21 canonical boundary curvature components.
"""

import logging
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Tuple, Union

from sympy import I, Rational
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from symbolic.config import DEFAULT_CONFIG
from symbolic.errors import AlgebraError, CyclicSubstitutionError

logger = logging.getLogger(__name__)

GaussRat = type(QQ_I.one)
Poly = PolyElement
Number = Union[int, str, Fraction, Rational]

TANGENTIAL = (1, 2, 3, 4)
NORMAL = 5

_PAIRS = [(a, b) for a in TANGENTIAL for b in TANGENTIAL if a < b]
CURVATURE_INDICES: List[Tuple[int, int, int, int]] = [
    p + q for p, q in combinations_with_replacement(_PAIRS, 2)
]


def curvature_name(indices: Tuple[int, int, int, int]) -> str:
    return "R_" + "_".join(str(i) for i in indices)


GENERATOR_NAMES = (
    DEFAULT_CONFIG.xi_names
    + (DEFAULT_CONFIG.normal_name,)
    + DEFAULT_CONFIG.parameter_names
    + tuple(curvature_name(idx) for idx in CURVATURE_INDICES)
)

RING = PolyRing(GENERATOR_NAMES, QQ_I, lex)
_GENS: Dict[str, Poly] = dict(zip(GENERATOR_NAMES, RING.gens))

XI = tuple(_GENS[name] for name in DEFAULT_CONFIG.xi_names)
XN = _GENS[DEFAULT_CONFIG.normal_name]
H1 = _GENS["h1"]
H2 = _GENS["h2"]
SB = _GENS["sB"]
SM = _GENS["sM"]
K_EXT = _GENS["K"]

ZERO = RING.zero
ONE = RING.one
I_UNIT = QQ_I(0, 1)

XI_PRIME_SQ = sum((x**2 for x in XI), ZERO)
Q_POLY = XI_PRIME_SQ + XN**2
XN_MINUS_I = XN - I_UNIT
XN_PLUS_I = XN + I_UNIT


def generator(name: str) -> Poly:
    """Returns the ring generator called ``name``."""
    try:
        return _GENS[name]
    except KeyError:
        raise AlgebraError(f"unknown generator: {name}") from None


def gauss(re: Number = 0, im: Number = 0) -> GaussRat:
    """Builds an exact Gaussian rational from real and imaginary parts."""
    return QQ_I.from_sympy(Rational(re) + I * Rational(im))


def gauss_parts(z: GaussRat) -> Tuple[Fraction, Fraction]:
    """Splits a Gaussian rational into reduced ``Fraction`` parts."""
    re = Fraction(int(QQ.numer(z.x)), int(QQ.denom(z.x)))
    im = Fraction(int(QQ.numer(z.y)), int(QQ.denom(z.y)))
    return re, im


def const(value: Union[GaussRat, Number]) -> Poly:
    if isinstance(value, GaussRat):
        return RING.ground_new(value)
    return RING.ground_new(gauss(value))


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    """Adds, subtracts or multiplies two polynomials exactly."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise AlgebraError(f"unknown polynomial operation: {op}")


def poly_substitute(p: Poly, target: Poly, replacement: Poly) -> Poly:
    """
    Replaces every power of the generator ``target`` by ``replacement``.

    Args:
        p (Poly): Polynomial to rewrite.
        target (Poly): A single ring generator.
        replacement (Poly): Polynomial free of ``target``.

    Returns:
        Poly: The expanded result.
    """
    if target not in RING.gens:
        raise AlgebraError(f"substitution target is not a generator: {target}")
    if replacement.degree(target) > 0:
        raise CyclicSubstitutionError(
            f"cyclic substitution: {target} occurs in its own replacement"
        )
    return p.compose(target, replacement)


def xi_degree(p: Poly) -> int:
    """Total degree of ``p`` in the five covariables."""
    idx = [RING.index(x) for x in XI + (XN,)]
    return max((sum(m[i] for i in idx) for m in p.itermonoms()), default=0)


def sphere_normal_form(p: Poly) -> Poly:
    """Reduces ``p`` modulo |xi'|^2 - 1 by eliminating even powers of x4."""
    x4 = XI[3]
    rest = ONE - XI[0] ** 2 - XI[1] ** 2 - XI[2] ** 2
    degree = p.degree(x4)
    if degree < 2:
        return p
    result = ZERO
    for k in range(degree + 1):
        c = p.coeff_wrt(x4, k)
        if c:
            result += c * rest ** (k // 2) * x4 ** (k % 2)
    return result


def vanishes_on_sphere(p: Poly) -> bool:
    return not sphere_normal_form(p)


def evaluate_at(p: Poly, values: Dict[Poly, GaussRat]) -> Poly:
    """Substitutes ground values for some generators, keeping the ring."""
    return p.subs([(g, v) for g, v in values.items()]) if values else p
