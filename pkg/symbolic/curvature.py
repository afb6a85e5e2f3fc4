"""Boundary Riemann tensor components: canonical storage and contraction."""

import logging
from collections import defaultdict
from typing import Dict, Optional, Tuple

from symbolic.errors import CurvatureIndexError, UnreducedTensorError
from symbolic.scalars import (
    CURVATURE_INDICES,
    RING,
    SB,
    TANGENTIAL,
    ZERO,
    GaussRat,
    Poly,
    curvature_name,
    gauss,
    generator,
)

logger = logging.getLogger(__name__)

Indices = Tuple[int, int, int, int]

_CURVATURE_GENS: Dict[Indices, Poly] = {
    idx: generator(curvature_name(idx)) for idx in CURVATURE_INDICES
}
_CURVATURE_SLOTS: Dict[int, Indices] = {
    RING.index(g): idx for idx, g in _CURVATURE_GENS.items()
}
_SECTIONAL = [idx for idx in CURVATURE_INDICES if idx[:2] == idx[2:]]
_BIANCHI = {(1, 2, 3, 4): 1, (1, 3, 2, 4): -1, (1, 4, 2, 3): 1}


def canonicalize_curvature(
    a: int, b: int, c: int, d: int
) -> Tuple[GaussRat, Optional[Indices]]:
    """
    Brings R(a,b,c,d) to its canonical representative.

    The representative has a < b, c < d and (a, b) <= (c, d). Components with a
    repeated index inside an antisymmetric pair are zero.

    Returns:
        Tuple[GaussRat, Optional[Indices]]: Sign and canonical indices, or
        (0, None) for a vanishing component.
    """
    for i in (a, b, c, d):
        if i not in TANGENTIAL:
            raise CurvatureIndexError(f"curvature index out of range 1..4: {i}")
    if a == b or c == d:
        return gauss(0), None
    sign = 1
    if a > b:
        a, b, sign = b, a, -sign
    if c > d:
        c, d, sign = d, c, -sign
    if (a, b) > (c, d):
        a, b, c, d = c, d, a, b
    return gauss(sign), (a, b, c, d)


def curvature(a: int, b: int, c: int, d: int) -> Poly:
    """Returns R(a,b,c,d) as a signed canonical generator."""
    sign, idx = canonicalize_curvature(a, b, c, d)
    if idx is None:
        return ZERO
    return _CURVATURE_GENS[idx] * sign


def curvature_degree(monom: Tuple[int, ...]) -> int:
    return sum(monom[i] for i in _CURVATURE_SLOTS)


def _split_monomial(monom: Tuple[int, ...]) -> Tuple[Tuple[int, ...], Optional[Indices]]:
    rest = list(monom)
    found = None
    for slot, idx in _CURVATURE_SLOTS.items():
        if monom[slot]:
            found = idx
            rest[slot] = 0
    return tuple(rest), found


def contract_curvature(p: Poly) -> Poly:
    """
    Rewrites every fully contracted curvature combination in terms of sB.

    Each group of terms sharing the same non-curvature monomial must be
    c * sum_{a<b} R(a,b,a,b), optionally plus a first-Bianchi multiple which is
    dropped. Since sB = sum_{t,l} R(t,l,t,l) = 2 sum_{a<b} R(a,b,a,b), the group
    becomes (c/2) * sB.

    Raises:
        UnreducedTensorError: If a group is not isotropic or a term is
            nonlinear in the curvature.
    """
    groups: Dict[Tuple[int, ...], Dict[Indices, GaussRat]] = defaultdict(dict)
    result = ZERO
    for monom, coeff in p.iterterms():
        degree = curvature_degree(monom)
        if degree == 0:
            result += RING({monom: coeff})
            continue
        if degree > 1:
            raise UnreducedTensorError(
                f"unreduced tensor: term of curvature degree {degree}"
            )
        rest, idx = _split_monomial(monom)
        groups[rest][idx] = coeff

    half = gauss(1, 0) / 2
    for rest, vector in sorted(groups.items()):
        c = vector.get(_SECTIONAL[0], gauss(0))
        residue = dict(vector)
        for idx in _SECTIONAL:
            if residue.pop(idx, gauss(0)) != c:
                raise UnreducedTensorError(
                    f"unreduced tensor: non-isotropic sectional part at {rest}"
                )
        if residue:
            d = residue.get((1, 2, 3, 4), gauss(0))
            bianchi = {idx: d * sign for idx, sign in _BIANCHI.items()}
            if residue != {k: v for k, v in bianchi.items() if v}:
                raise UnreducedTensorError(
                    f"unreduced tensor: free components {sorted(residue)}"
                )
            logger.info(f"Dropped first-Bianchi residue with coefficient {d}")
        if c:
            result += RING({rest: c * half}) * SB
    return result
