"""Boundary geometry relations and assembly of the final boundary integrand."""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict

from sympy import Rational, Symbol, diff, expand, series

from boundary_residue.errors import PipelineInvariantError
from symbolic.scalars import H1, H2, K_EXT, RING, SB, SM, ZERO, GaussRat, Poly, gauss
from symbolic.text import render_poly

logger = logging.getLogger(__name__)

BOUNDARY_DIMENSION = 4
# pi*Omega3 = 2 pi^3, reported in units of pi^3/16
THEOREM_SCALE = gauss(32)
INTERMEDIATE_SCALE = gauss(16)


@dataclass(frozen=True)
class Relations:
    """Scalar curvature, mean extrinsic curvature and boundary term at x0."""

    scalar_curvature: Poly
    extrinsic_curvature: Poly
    boundary_term: Poly


@dataclass
class TheoremOutput:
    """Coefficients of K^2, sM and sB in units of pi^3/16."""

    k_squared: GaussRat
    scalar_curvature: GaussRat
    boundary_curvature: GaussRat
    intermediate: Poly
    source: str = "engine"

    def coefficients(self) -> Dict[str, GaussRat]:
        return {
            "K2": self.k_squared,
            "sM": self.scalar_curvature,
            "sB": self.boundary_curvature,
        }

    def as_poly(self) -> Poly:
        return (
            K_EXT**2 * self.k_squared
            + SM * self.scalar_curvature
            + SB * self.boundary_curvature
        )


@lru_cache(maxsize=None)
def boundary_relations() -> Relations:
    """
    Derives the boundary relations from the warping function by series in xn.

    With h(xn) = 1 + h1 xn + h2 xn^2 / 2 and b^2 = 1/h, the warped-product
    formula sM = 8 b'' - 12 (b')^2 + sB gives sM in terms of h1, h2 and sB.
    The second fundamental form of g = g_boundary / h + dxn^2 is
    K_ij = (1/2) d/dxn (1/h) delta_ij; K is its trace over the boundary.

    Returns:
        Relations: sM, K and the boundary Einstein-Hilbert term 2K.
    """
    x, h1, h2, s_b = Symbol("xn"), Symbol("h1"), Symbol("h2"), Symbol("sB")
    h = 1 + h1 * x + h2 * x**2 / 2
    b = expand(series(h ** Rational(-1, 2), x, 0, 3).removeO())
    b_1 = b.coeff(x, 1)
    b_2 = 2 * b.coeff(x, 2)
    scalar = expand(8 * b_2 - 12 * b_1**2 + s_b)

    k_ii = Rational(1, 2) * diff(1 / h, x).subs(x, 0)
    extrinsic = expand(BOUNDARY_DIMENSION * k_ii)

    relations = Relations(
        scalar_curvature=RING.from_expr(scalar),
        extrinsic_curvature=RING.from_expr(extrinsic),
        boundary_term=RING.from_expr(expand(2 * extrinsic)),
    )
    logger.info(
        f"Boundary relations: sM = {render_poly(relations.scalar_curvature)}, "
        f"K = {render_poly(relations.extrinsic_curvature)}"
    )
    return relations


def _solve_linear(relation: Poly, lhs: Poly, generator: Poly) -> Poly:
    """Solves lhs = relation for a generator occurring linearly in relation."""
    slope = relation.coeff_wrt(generator, 1)
    if relation.degree(generator) != 1 or not slope.is_ground:
        raise PipelineInvariantError(f"relation is not linear in {generator}")
    rest = relation - slope * generator
    return (lhs - rest).quo_ground(slope.LC)


def assemble_theorem(density_sum: Poly, source: str = "engine") -> TheoremOutput:
    """
    Rewrites a boundary density over {h1^2, h2, sB} in K^2, sM and sB.

    Args:
        density_sum (Poly): The summed density in units of pi*Omega3.
        source (str): Label of the sum, "engine" or "published".

    Returns:
        TheoremOutput: Coefficients in units of pi^3/16 and the x16 form.
    """
    relations = boundary_relations()
    h2_value = _solve_linear(relations.scalar_curvature, SM, H2)
    h1_value = _solve_linear(relations.extrinsic_curvature, K_EXT, H1)

    rewritten = density_sum.compose(H2, h2_value).compose(H1, h1_value)
    if rewritten.degree(H1) > 0 or rewritten.degree(H2) > 0:
        raise PipelineInvariantError(
            f"substitution left h1 or h2 behind: {render_poly(rewritten)}"
        )
    allowed = {(K_EXT**2).LM, SM.LM, SB.LM}
    stray = [m for m in rewritten.itermonoms() if m not in allowed]
    if stray:
        raise PipelineInvariantError(
            f"theorem density leaves the basis K^2, sM, sB: {render_poly(rewritten)}"
        )

    scaled = rewritten * THEOREM_SCALE
    output = TheoremOutput(
        k_squared=scaled.coeff(K_EXT**2),
        scalar_curvature=scaled.coeff(SM),
        boundary_curvature=scaled.coeff(SB),
        intermediate=density_sum * INTERMEDIATE_SCALE,
        source=source,
    )
    logger.info(f"Assembled {source} theorem: {render_poly(output.as_poly())} [pi^3/16]")
    return output


def density_coefficients(p: Poly) -> Dict[str, GaussRat]:
    """Coefficients of h1^2, h2 and sB."""
    return {"h1sq": p.coeff(H1**2), "h2": p.coeff(H2), "sB": p.coeff(SB)}


def density_from_coefficients(values: Dict[str, GaussRat]) -> Poly:
    total = ZERO
    for key, gen in (("h1sq", H1**2), ("h2", H2), ("sB", SB)):
        total += gen * values.get(key, gauss(0))
    return total
