"""x-jets of the Dirac symbol at the boundary point and of its parametrix.

A jet stores a symbol's value and its x-derivatives up to a fixed order at
x0. Keys are sorted direction tuples: 1..4 tangential, 5 the normal x_n.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from typing import Callable, Dict, List, Sequence, Tuple

from boundary_residue.errors import MissingJetEntryError
from symbolic.clifford import CliffElem, c_xi, c_xi_prime, cl_product, e
from symbolic.curvature import curvature
from symbolic.ratxi import RatXi, dxi
from symbolic.scalars import (
    H1,
    H2,
    I_UNIT,
    Q_POLY,
    TANGENTIAL,
    XI,
    XI_PRIME_SQ,
    ZERO,
    Poly,
    gauss,
)

logger = logging.getLogger(__name__)

Key = Tuple[int, ...]
DIRECTIONS = (1, 2, 3, 4, 5)
NORMAL_DIRECTION = 5


def direction_label(d: int) -> str:
    return "xn" if d == NORMAL_DIRECTION else f"x{d}"


def key_label(key: Key) -> str:
    if not key:
        return "value"
    return "d" + "d".join(direction_label(d) for d in key)


def keys_up_to(order: int) -> List[Key]:
    keys: List[Key] = []
    for n in range(order + 1):
        keys.extend(combinations_with_replacement(DIRECTIONS, n))
    return keys


@dataclass(frozen=True)
class JetSymbol:
    """Value and x-derivatives at x0 of a symbol, up to ``order``."""

    name: str
    order: int
    entries: Dict[Key, RatXi] = field(repr=False)

    def __getitem__(self, key: Sequence[int]) -> RatXi:
        key = tuple(sorted(key))
        if len(key) > self.order or key not in self.entries:
            raise MissingJetEntryError(
                f"{self.name}: entry {key_label(key)} is not populated "
                f"(jet order {self.order})"
            )
        return self.entries[key]

    @property
    def value(self) -> RatXi:
        return self[()]

    def shift(self, direction: int) -> "JetSymbol":
        """The jet of the x_direction derivative, one order shorter."""
        if self.order < 1:
            raise MissingJetEntryError(
                f"{self.name}: cannot differentiate a 0-jet in {direction_label(direction)}"
            )
        entries = {
            key: self[key + (direction,)] for key in keys_up_to(self.order - 1)
        }
        return JetSymbol(
            f"d{direction_label(direction)}({self.name})", self.order - 1, entries
        )

    def map(self, fn: Callable[[RatXi], RatXi], name: str) -> "JetSymbol":
        return JetSymbol(name, self.order, {k: fn(v) for k, v in self.entries.items()})

    def scale(self, c, name: str = None) -> "JetSymbol":
        return self.map(lambda v: v * c, name or self.name)

    def truncate(self, order: int) -> "JetSymbol":
        return JetSymbol(
            self.name,
            min(order, self.order),
            {k: v for k, v in self.entries.items() if len(k) <= order},
        )

    def __add__(self, other: "JetSymbol") -> "JetSymbol":
        order = min(self.order, other.order)
        entries = {key: self[key] + other[key] for key in keys_up_to(order)}
        return JetSymbol(f"{self.name} + {other.name}", order, entries)

    def __neg__(self) -> "JetSymbol":
        return self.map(lambda v: -v, f"-{self.name}")

    def __sub__(self, other: "JetSymbol") -> "JetSymbol":
        return self + (-other)


def jet_from_table(name: str, order: int, table: Dict[Key, RatXi]) -> JetSymbol:
    """Fills every key up to ``order``; keys missing from ``table`` are zero."""
    entries = {key: table.get(key, RatXi.zero()) for key in keys_up_to(order)}
    return JetSymbol(name, order, entries)


def jet_product(f: JetSymbol, g: JetSymbol, name: str = None) -> JetSymbol:
    """Leibniz product of two jets; the result has the smaller order."""
    order = min(f.order, g.order)
    entries: Dict[Key, RatXi] = {}
    for key in keys_up_to(order):
        total = RatXi.zero()
        positions = range(len(key))
        for n in range(len(key) + 1):
            for chosen in combinations(positions, n):
                left = tuple(key[p] for p in chosen)
                right = tuple(key[p] for p in positions if p not in chosen)
                a = f[left]
                if not a:
                    continue
                b = g[right]
                if b:
                    total = total + a * b
        entries[key] = total
    return JetSymbol(name or f"{f.name}*{g.name}", order, entries)


def reciprocal_norm(norm: JetSymbol) -> JetSymbol:
    """Jet of 1/|xi|^2 from the jet of |xi|^2, whose value must be Q."""
    if not norm.value.equals(RatXi.of(Q_POLY)):
        raise MissingJetEntryError(f"{norm.name}: value is not |xi|^2 = Q")
    inv = {k: RatXi.of(1, q=k) for k in (1, 2, 3)}
    entries: Dict[Key, RatXi] = {(): inv[1]}
    for key in keys_up_to(min(norm.order, 2)):
        if len(key) == 1:
            entries[key] = -(norm[key] * inv[2])
        elif len(key) == 2:
            mu, nu = key
            entries[key] = (norm[(mu,)] * norm[(nu,)] * inv[3]) * 2 - norm[key] * inv[2]
    return JetSymbol(f"1/{norm.name}", min(norm.order, 2), entries)


@dataclass(frozen=True)
class MetricJet:
    """Jets of |xi|^2, c(xi), p0 and p1 = i c(xi) at x0."""

    norm_sq: JetSymbol
    cxi: JetSymbol
    p0: JetSymbol
    p1: JetSymbol


def _tangential_norm_hessian(i: int, j: int) -> Poly:
    total = ZERO
    for a, b in product(TANGENTIAL, repeat=2):
        total += (curvature(i, a, j, b) + curvature(i, b, j, a)) * XI[a - 1] * XI[b - 1]
    return total * gauss(-1) / 3


def _tangential_clifford_hessian(i: int, j: int) -> CliffElem:
    coeffs = []
    for t in TANGENTIAL:
        c = ZERO
        for l in TANGENTIAL:
            c += XI[l - 1] * (curvature(t, i, l, j) + curvature(t, j, l, i))
        coeffs.append(c * gauss(1) / 6)
    return CliffElem({1 << (t - 1): c for t, c in zip(TANGENTIAL, coeffs)})


def _connection_term(i: int) -> CliffElem:
    total = CliffElem()
    for b, s, a in product(TANGENTIAL, repeat=3):
        r = curvature(b, i, s, a)
        if r:
            total = total + cl_product(e(b), e(s), e(a)).scale(r)
    return total.scale(gauss(1) / 8)


def build_metric_jet() -> MetricJet:
    """
    Builds the jets of |xi|^2, c(xi), p0 and p1 at the boundary point.

    Tangential first derivatives vanish in boundary normal coordinates; mixed
    tangential-normal second derivatives vanish; x_n derivatives come from the
    warping function h with h(0) = 1.
    """
    n = NORMAL_DIRECTION
    norm_table: Dict[Key, RatXi] = {
        (): RatXi.of(Q_POLY),
        (n,): RatXi.of(H1 * XI_PRIME_SQ),
        (n, n): RatXi.of(H2 * XI_PRIME_SQ),
    }
    cxi_table: Dict[Key, RatXi] = {
        (): RatXi.of(c_xi()),
        (n,): RatXi.of(c_xi_prime().scale(H1 * gauss(1) / 2)),
        (n, n): RatXi.of(
            c_xi_prime().scale(H1**2 * gauss(3) / 4 - H2 * gauss(1) / 2)
        ),
    }
    for i, j in combinations_with_replacement(TANGENTIAL, 2):
        norm_table[(i, j)] = RatXi.of(_tangential_norm_hessian(i, j))
        cxi_table[(i, j)] = RatXi.of(_tangential_clifford_hessian(i, j))

    p0_table: Dict[Key, RatXi] = {
        (): RatXi.of(e(5).scale(-H1)),
        (n,): RatXi.of(e(5).scale(H1**2 - H2)),
    }
    for i in TANGENTIAL:
        p0_table[(i,)] = RatXi.of(_connection_term(i))

    norm_sq = jet_from_table("|xi|^2", 2, norm_table)
    cxi = jet_from_table("c(xi)", 2, cxi_table)
    p0 = jet_from_table("p0", 1, p0_table)
    p1 = cxi.scale(I_UNIT, "p1")
    logger.info("Built metric jets of |xi|^2, c(xi), p0 and p1")
    return MetricJet(norm_sq=norm_sq, cxi=cxi, p0=p0, p1=p1)


def clifford_derivative_jets(metric: MetricJet) -> Dict[int, JetSymbol]:
    """Jets of d/dxi_j c(xi) for j = 1..5 (5 the normal covariable)."""
    return {
        j: metric.cxi.map(lambda v, j=j: dxi(v, j), f"dxi{j} c(xi)")
        for j in DIRECTIONS
    }


def _next_symbol(
    q1: JetSymbol,
    previous: JetSymbol,
    p0: JetSymbol,
    dc: Dict[int, JetSymbol],
    name: str,
) -> JetSymbol:
    inner = jet_product(p0, previous)
    for j in DIRECTIONS:
        inner = inner + jet_product(dc[j], previous.shift(j))
    result = -jet_product(q1, inner)
    return JetSymbol(name, result.order, result.entries)


def derive_inverse_symbols(
    metric: MetricJet,
) -> Tuple[JetSymbol, JetSymbol, JetSymbol]:
    """
    Derives the jets of q_{-1}, q_{-2}, q_{-3} by the composition recursion.

    q_{-1} = i c(xi) / |xi|^2 as a 2-jet,
    q_{-2} = -q_{-1} [p0 q_{-1} + sum_j dxi_j c(xi) dx_j q_{-1}] as a 1-jet,
    q_{-3} = -q_{-1} [p0 q_{-2} + sum_j dxi_j c(xi) dx_j q_{-2}] as a 0-jet.

    Returns:
        Tuple[JetSymbol, JetSymbol, JetSymbol]: The three inverse symbols.
    """
    q1 = jet_product(metric.p1, reciprocal_norm(metric.norm_sq), "sigma-1")
    dc = clifford_derivative_jets(metric)
    q2 = _next_symbol(q1, q1, metric.p0, dc, "sigma-2")
    q3 = _next_symbol(q1, q2, metric.p0, dc, "sigma-3")
    logger.info(
        f"Derived inverse symbols with jet orders {q1.order}, {q2.order}, {q3.order}"
    )
    return q1, q2, q3


def jet_derivative(s: JetSymbol, j: int = 0, alpha: Sequence[int] = ()) -> RatXi:
    """
    Looks up d^j/dx_n^j d^alpha/dx'^alpha of a symbol at x0.

    Args:
        s (JetSymbol): The symbol.
        j (int): Number of normal derivatives.
        alpha (Sequence[int]): Tangential directions, repeated as needed.

    Returns:
        RatXi: The stored, unrestricted derivative.
    """
    for d in alpha:
        if d not in TANGENTIAL:
            raise MissingJetEntryError(f"{s.name}: {d} is not a tangential direction")
    return s[(NORMAL_DIRECTION,) * j + tuple(alpha)]


def inverse_identity_residual(metric: MetricJet, q1: JetSymbol) -> Dict[Key, RatXi]:
    """
    Compares each first-order entry of q_{-1} with -q (dp1) q.

    Returns:
        Dict[Key, RatXi]: Nonzero residuals by key; empty when the identity holds.
    """
    residuals: Dict[Key, RatXi] = {}
    value = q1.value
    for key in keys_up_to(1):
        if not key:
            continue
        expected = -(value * metric.p1[key] * value)
        diff = q1[key] - expected
        if diff:
            residuals[key] = diff
    return residuals


def second_order_inverse_residual(metric: MetricJet, q1: JetSymbol) -> Dict[Key, RatXi]:
    """
    Compares second-order entries of q_{-1} with the derivative of -q (dp1) q.

    The metric tables are only mutually consistent to first order, so
    nonzero entries here are reported rather than raised.
    """
    residuals: Dict[Key, RatXi] = {}
    q = q1.value
    for key in keys_up_to(2):
        if len(key) != 2:
            continue
        mu, nu = key
        a, b = metric.p1[(mu,)], metric.p1[(nu,)]
        expected = q * a * q * b * q + q * b * q * a * q - q * metric.p1[key] * q
        diff = q1[key] - expected
        if diff:
            residuals[key] = diff
            logger.info(f"q-1 second-order entry {key_label(key)} differs from the inverse rule")
    return residuals


def composition_residual(
    metric: MetricJet, q1: JetSymbol, q2: JetSymbol
) -> Dict[str, Dict[Key, RatXi]]:
    """
    Checks p1 q_{-1} = 1 and p1 q_{-2} + p0 q_{-1} + sum_j dxi_j p1 D_j q_{-1} = 0.

    Returns:
        Dict[str, Dict[Key, RatXi]]: Nonzero residual entries per order.
    """
    one = jet_from_table("1", q1.order, {(): RatXi.of(1)})
    order0 = jet_product(metric.p1, q1) - one
    dc = clifford_derivative_jets(metric)
    order1 = jet_product(metric.p1, q2) + jet_product(metric.p0, q1)
    for j in DIRECTIONS:
        order1 = order1 + jet_product(dc[j], q1.shift(j))
    report = {}
    for label, jet in (("order 0", order0), ("order -1", order1)):
        report[label] = {k: v for k, v in jet.entries.items() if v}
        for key in report[label]:
            logger.info(f"Composition residual at {label}, {key_label(key)}")
    return report
