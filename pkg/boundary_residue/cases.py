"""The fifteen boundary cases and their exact evaluation."""

import logging
import time
from dataclasses import dataclass, field
from itertools import product
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from boundary_residue.errors import PipelineInvariantError
from boundary_residue.jets import JetSymbol, jet_derivative
from symbolic.clifford import CliffElem, cl_trace_product
from symbolic.ratxi import RatXi, dxi, integrate_xi_n, pi_plus, restrict_to_unit_sphere
from symbolic.scalars import H1, H2, SB, TANGENTIAL, ZERO, GaussRat, Poly, gauss
from symbolic.sphere import integrate_sphere
from symbolic.text import render_poly

logger = logging.getLogger(__name__)

# (r, l) families and their (k, j, |alpha|) triples, in publication order
CASE_FAMILIES: Tuple[Tuple[Tuple[int, int], Tuple[Tuple[int, int, int], ...]], ...] = (
    ((-1, -1), ((0, 1, 1), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (2, 0, 0))),
    ((-1, -2), ((0, 1, 0), (0, 0, 1), (1, 0, 0))),
    ((-2, -1), ((0, 1, 0), (0, 0, 1), (1, 0, 0))),
    ((-2, -2), ((0, 0, 0),)),
    ((-1, -3), ((0, 0, 0),)),
    ((-3, -1), ((0, 0, 0),)),
)
BOUNDARY_ORDER = 4

_BASIS_MONOMIALS = {m for g in (H1**2, H2, SB) for m in g.itermonoms()}


@dataclass(frozen=True, order=True)
class CaseSpec:
    """One summand (r, l, k, j, |alpha|) of the boundary term."""

    number: int
    r: int
    l: int
    k: int
    j: int
    alpha: int

    def __post_init__(self):
        if -self.r - self.l + self.k + self.j + self.alpha != BOUNDARY_ORDER:
            raise PipelineInvariantError(f"case {self.number}: orders do not add up")

    @property
    def coefficient(self) -> GaussRat:
        """(-i)^(|alpha|+j+k+1) / (|alpha|! (j+k+1)!)."""
        power = self.alpha + self.j + self.k + 1
        return gauss(0, -1) ** power / (factorial(self.alpha) * factorial(self.j + self.k + 1))

    @property
    def label(self) -> str:
        return f"({self.r},{self.l},{self.k},{self.j},{self.alpha})"


@dataclass
class CaseResult:
    """Exact density of one case in units of pi*Omega3."""

    spec: CaseSpec
    density: Poly
    volume_part: Poly = field(default_factory=lambda: ZERO)
    elapsed: float = 0.0
    published_value: Optional[Poly] = None
    published_unit: str = "pi*Omega3"
    status: Optional[str] = None
    diff: Optional[Poly] = None
    verdict: Optional[str] = None


def enumerate_cases() -> List[CaseSpec]:
    specs = []
    for (r, l), triples in CASE_FAMILIES:
        for k, j, alpha in triples:
            specs.append(CaseSpec(len(specs) + 1, r, l, k, j, alpha))
    return specs


def case_by_number(number: int) -> CaseSpec:
    for spec in enumerate_cases():
        if spec.number == number:
            return spec
    raise PipelineInvariantError(f"no case numbered {number}")


def symbol_name(order: int) -> str:
    return f"sigma{order}"


def r_factor(spec: CaseSpec, symbols: Dict[str, JetSymbol], directions: Sequence[int]) -> RatXi:
    """d^j_xn d^alpha_xi' d^k_xin pi+ sigma_r, restricted to |xi'| = 1."""
    f = jet_derivative(symbols[symbol_name(spec.r)], spec.j)
    for d in directions:
        f = dxi(f, d)
    f = pi_plus(restrict_to_unit_sphere(f))
    return dxi(f, "n", spec.k)


def l_factor(spec: CaseSpec, symbols: Dict[str, JetSymbol], directions: Sequence[int]) -> RatXi:
    """d^alpha_x' d^(j+1)_xin d^k_xn sigma_l, restricted to |xi'| = 1."""
    f = jet_derivative(symbols[symbol_name(spec.l)], spec.k, directions)
    return dxi(restrict_to_unit_sphere(f), "n", spec.j + 1)


def trace_integral(pairs: Iterable[Tuple[RatXi, RatXi]]) -> Tuple[Poly, Poly]:
    """
    Integrates sum tr(a b) over the xn line.

    Returns:
        Tuple[Poly, Poly]: The integral in units of pi, and the integral of the
        e1...e5 coefficient of the products that the trace discarded.
    """
    traces = RatXi.zero(True)
    volumes = RatXi.zero(True)
    for a, b in pairs:
        if not a or not b:
            continue
        trace, volume = cl_trace_product(a.numerator, b.numerator)
        minus, plus = a.minus + b.minus, a.plus + b.plus
        traces = traces + RatXi(CliffElem.scalar(trace), 0, minus, plus, True)
        volumes = volumes + RatXi(CliffElem.scalar(volume), 0, minus, plus, True)
    return integrate_xi_n(traces).part(0), integrate_xi_n(volumes).part(0)


def to_density(coefficient: GaussRat, xi_n_integral: Poly) -> Poly:
    """Sphere-integrates and rescales pi * pi^2 to units of pi*Omega3 = 2 pi^3."""
    sphere = integrate_sphere(xi_n_integral)
    return sphere.value * coefficient * gauss("1/2")


def check_density(spec: CaseSpec, density: Poly) -> None:
    for monom in density.itermonoms():
        if monom not in _BASIS_MONOMIALS:
            raise PipelineInvariantError(
                f"case {spec.number}: density leaves the basis h1^2, h2, sB: "
                f"{render_poly(density)}"
            )


def evaluate_case(spec: CaseSpec, symbols: Dict[str, JetSymbol]) -> CaseResult:
    """
    Evaluates one case exactly.

    The multi-index sum over |alpha| = m is an ordered-tuple sum over
    tangential directions divided by m!, which the coefficient carries.

    Args:
        spec (CaseSpec): The case.
        symbols (Dict[str, JetSymbol]): q-1, q-2 and q-3 by name.

    Returns:
        CaseResult: Density in units of pi*Omega3.
    """
    start = time.perf_counter()
    pairs = (
        (r_factor(spec, symbols, t), l_factor(spec, symbols, t))
        for t in product(TANGENTIAL, repeat=spec.alpha)
    )
    integral, volume = trace_integral(pairs)
    density = to_density(spec.coefficient, integral)
    check_density(spec, density)
    if volume:
        logger.warning(
            f"Case {spec.number}: grade-5 part reached the trace: {render_poly(volume)}"
        )
    elapsed = time.perf_counter() - start
    logger.info(
        f"Case {spec.number} {spec.label} = {render_poly(density)} [pi*Omega3] "
        f"in {elapsed:.2f}s"
    )
    return CaseResult(spec=spec, density=density, volume_part=volume, elapsed=elapsed)
