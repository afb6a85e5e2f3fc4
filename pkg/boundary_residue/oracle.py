"""Floating-point re-evaluation of symbols, projections and cases.

The oracle shares only the metric jet tables with the exact engine. It turns
them into Taylor polynomials in the position y, differentiates the resulting
rational functions with sympy, multiplies Clifford elements as 8x8 matrices,
projects with a trapezoid rule on a circle around xi_n = i, integrates xi_n
by Gauss-Legendre after xi_n = tan(theta) and averages over the vertices of
the 600-cell.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from itertools import permutations, product
from math import factorial
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy import I, Rational, Symbol, diff, lambdify

from boundary_residue.cases import CaseResult, CaseSpec, symbol_name
from boundary_residue.config import DEFAULT_ORACLE_CONFIG, OracleConfig
from boundary_residue.jets import (
    DIRECTIONS,
    NORMAL_DIRECTION,
    JetSymbol,
    Key,
    MetricJet,
    build_metric_jet,
)
from boundary_residue.lemmas import LemmaCheck
from symbolic.clifford import VOLUME, mask_indices
from symbolic.ratxi import RatXi
from symbolic.scalars import (
    CURVATURE_INDICES,
    GENERATOR_NAMES,
    RING,
    TANGENTIAL,
    GaussRat,
    Poly,
    curvature_name,
    gauss_parts,
)

logger = logging.getLogger(__name__)

ENGINE_CONFIRMED = "engine confirmed"
ENGINE_DEFECT = "engine defect"
INCONCLUSIVE = "inconclusive"

# (variable, direction): variable 0 is the position y, 1 the covariable xi
Derivs = Tuple[Tuple[int, int], ...]
Y, XI = 0, 1

_XI_SYMBOLS = tuple(
    RING.symbols[GENERATOR_NAMES.index(n)] for n in ("x1", "x2", "x3", "x4", "xn")
)
_Y_SYMBOLS = tuple(Symbol(f"y{d}") for d in DIRECTIONS)
_SPHERE_VOLUME = 2 * np.pi**2
_CHUNK = 24


def gamma_matrices() -> List[np.ndarray]:
    """Hermitian 4x4 gamma matrices squaring to the identity."""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    one = np.eye(2, dtype=complex)
    return [
        np.kron(sx, sx),
        np.kron(sx, sy),
        np.kron(sx, sz),
        np.kron(sy, one),
        np.kron(sz, one),
    ]


@lru_cache(maxsize=None)
def clifford_matrices() -> Dict[int, np.ndarray]:
    """
    8x8 matrices of every Clifford monomial.

    e_k acts as diag(i gamma_k, -i gamma_k); both inequivalent spinor modules
    appear, so the volume element is traceless.
    """
    zero = np.zeros((4, 4), dtype=complex)
    generators = [np.block([[1j * g, zero], [zero, -1j * g]]) for g in gamma_matrices()]
    matrices = {}
    for mask in range(VOLUME + 1):
        factors = (generators[k - 1] for k in mask_indices(mask))
        matrices[mask] = reduce(np.matmul, factors, np.eye(8, dtype=complex))
    return matrices


@lru_cache(maxsize=None)
def _numpy_function(expr):
    return lambdify(_XI_SYMBOLS, expr, "numpy")


def normalized_trace(m: np.ndarray) -> np.ndarray:
    return np.trace(m, axis1=-2, axis2=-1) / 2


@lru_cache(maxsize=None)
def cell600_vertices() -> np.ndarray:
    """The 120 unit vertices of the 600-cell, a spherical 11-design on S^3."""
    phi = (1 + np.sqrt(5)) / 2
    vertices = []
    for k in range(4):
        for s in (1, -1):
            v = np.zeros(4)
            v[k] = s
            vertices.append(v)
    vertices.extend(np.array(s) / 2 for s in product((1, -1), repeat=4))
    base = (phi / 2, 1 / 2, 1 / (2 * phi), 0.0)
    even = [p for p in permutations(range(4)) if _parity(p) == 0]
    for p in even:
        for signs in product((1, -1), repeat=3):
            v = np.zeros(4)
            for slot, value, sign in zip(p, base, signs + (1,)):
                v[slot] = sign * value
            vertices.append(v)
    return np.array(vertices)


def _parity(p: Tuple[int, ...]) -> int:
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]) % 2


def to_complex(z: GaussRat) -> complex:
    re, im = gauss_parts(z)
    return complex(float(re), float(im))


@dataclass
class Sample:
    """Random values of h1, h2 and an algebraic curvature tensor R = A wedge A."""

    h1: Rational
    h2: Rational
    shape: List[List[Rational]]
    values: Dict[Symbol, Rational] = field(default_factory=dict)

    def __post_init__(self):
        a = self.shape
        by_name = {"h1": self.h1, "h2": self.h2}
        for idx in CURVATURE_INDICES:
            p, q, r, s = (i - 1 for i in idx)
            by_name[curvature_name(idx)] = a[p][r] * a[q][s] - a[p][s] * a[q][r]
        trace = sum(a[i][i] for i in range(4))
        square = sum(a[i][j] * a[j][i] for i in range(4) for j in range(4))
        by_name["sB"] = trace**2 - square
        by_name["sM"] = 3 * self.h1**2 - 4 * self.h2 + by_name["sB"]
        by_name["K"] = -2 * self.h1
        symbols = dict(zip(GENERATOR_NAMES, RING.symbols))
        self.values = {symbols[name]: value for name, value in by_name.items()}

    def expr(self, p: Poly):
        return p.as_expr().xreplace(self.values)

    def scalar(self, p: Poly) -> complex:
        return complex(self.expr(p))


def random_sample(rng: np.random.Generator) -> Sample:
    def rational() -> Rational:
        return Rational(int(rng.integers(-6, 7)), int(rng.integers(1, 5)))

    shape = [[None] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            shape[i][j] = shape[j][i] = rational()
    return Sample(h1=rational(), h2=rational(), shape=shape)


class Points:
    """Evaluation points (xi', xi_n) with a memo of symbol values."""

    def __init__(self, xi: np.ndarray, xn: np.ndarray):
        self.xi = np.asarray(xi, dtype=float)
        self.xn = np.asarray(xn, dtype=complex)
        self.cache: Dict[Tuple[str, Derivs], np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.xn)

    def args(self) -> Tuple[np.ndarray, ...]:
        return tuple(self.xi[:, k] for k in range(4)) + (self.xn,)


def _canonical(derivs) -> Derivs:
    return tuple(sorted(derivs))


def _taylor(jet: JetSymbol, sample: Sample) -> Dict[int, object]:
    """sum_key jet[key] y^key / key! per Clifford monomial."""
    terms: Dict[int, object] = {}
    for key, entry in jet.entries.items():
        if not entry:
            continue
        monomial = 1
        for d, m in Counter(key).items():
            monomial *= _Y_SYMBOLS[d - 1] ** m / factorial(m)
        for mask, coeff in entry.numerator:
            terms[mask] = terms.get(mask, 0) + sample.expr(coeff) * monomial
    return terms


class NumericSymbols:
    """Symbols as functions of (y, xi) at one sample, evaluated as matrices."""

    def __init__(self, metric: MetricJet, sample: Sample):
        self.sample = sample
        norm = _taylor(metric.norm_sq, sample)[0]
        cxi = _taylor(metric.cxi, sample)
        self._base: Dict[str, Dict[int, object]] = {
            "p0": _taylor(metric.p0, sample),
            "sigma-1": {m: I * c / norm for m, c in cxi.items()},
        }
        for j in DIRECTIONS:
            self._base[f"dc{j}"] = {m: diff(c, _XI_SYMBOLS[j - 1]) for m, c in cxi.items()}
        self._products = {
            "sigma-2": self._recursion("sigma-1"),
            "sigma-3": self._recursion("sigma-2"),
        }
        self._functions: Dict[Tuple[str, Derivs], list] = {}

    @staticmethod
    def _recursion(previous: str):
        terms = [(-1, (("sigma-1", ()), ("p0", ()), (previous, ())))]
        for j in DIRECTIONS:
            terms.append((-1, (("sigma-1", ()), (f"dc{j}", ()), (previous, ((Y, j),)))))
        return terms

    def _compiled(self, name: str, derivs: Derivs) -> list:
        key = (name, derivs)
        if key not in self._functions:
            variables = [(_Y_SYMBOLS if v == Y else _XI_SYMBOLS)[d - 1] for v, d in derivs]
            at_boundary = {y: 0 for y in _Y_SYMBOLS}
            compiled = []
            for mask, expr in self._base[name].items():
                value = diff(expr, *variables).xreplace(at_boundary) if variables else expr.xreplace(at_boundary)
                if value != 0:
                    compiled.append((mask, _numpy_function(value)))
            self._functions[key] = compiled
        return self._functions[key]

    def evaluate(self, name: str, derivs: Derivs, points: Points) -> np.ndarray:
        """
        The derivative ``derivs`` of symbol ``name`` at y = 0.

        Returns:
            np.ndarray: Shape (len(points), 8, 8).
        """
        derivs = _canonical(derivs)
        key = (name, derivs)
        if key in points.cache:
            return points.cache[key]
        if name in self._products:
            result = self._leibniz(self._products[name], derivs, points)
        else:
            result = np.zeros((len(points), 8, 8), dtype=complex)
            matrices = clifford_matrices()
            for mask, fn in self._compiled(name, derivs):
                values = np.broadcast_to(np.asarray(fn(*points.args()), dtype=complex), (len(points),))
                result = result + values[:, None, None] * matrices[mask]
        points.cache[key] = result
        return result

    def _leibniz(self, terms, derivs: Derivs, points: Points) -> np.ndarray:
        total = np.zeros((len(points), 8, 8), dtype=complex)
        for sign, factors in terms:
            for assignment in product(range(len(factors)), repeat=len(derivs)):
                parts = [list(extra) for _, extra in factors]
                for slot, d in zip(assignment, derivs):
                    parts[slot].append(d)
                values = [self.evaluate(f, tuple(p), points) for (f, _), p in zip(factors, parts)]
                total = total + sign * reduce(np.matmul, values)
        return total


class NumericOracle:
    """Arbitrates exact results against independent floating-point values."""

    def __init__(self, config: OracleConfig = DEFAULT_ORACLE_CONFIG, metric: Optional[MetricJet] = None):
        self.config = config
        self.metric = metric or build_metric_jet()
        rng = np.random.default_rng(config.seed)
        self.samples = [random_sample(rng) for _ in range(config.samples)]
        self.models = [NumericSymbols(self.metric, s) for s in self.samples]
        self._rng = rng

        theta = 2 * np.pi * np.arange(config.contour_points) / config.contour_points
        self._contour = 1j + config.contour_radius * np.exp(1j * theta)
        self._contour_weights = config.contour_radius * np.exp(1j * theta) / config.contour_points
        nodes, weights = np.polynomial.legendre.leggauss(config.quadrature_nodes)
        angle = nodes * np.pi / 2
        self._xn = np.tan(angle)
        self._xn_weights = weights * (np.pi / 2) / np.cos(angle) ** 2
        logger.info(f"Numeric oracle ready with {config.samples} samples, seed {config.seed}")

    def _kernel(self, xn: np.ndarray, order: int) -> np.ndarray:
        """d^order/dxn^order of the contour projection kernel, shape (len(xn), M)."""
        diff_ = xn[:, None] - self._contour[None, :]
        return self._contour_weights[None, :] * (-1) ** order * factorial(order) / diff_ ** (order + 1)

    def symbol_values(self, name: str, key: Key, xi: np.ndarray, xn: np.ndarray) -> List[np.ndarray]:
        """Numeric x-derivative ``key`` of q-1, q-2 or q-3, one array per sample."""
        derivs = tuple((Y, d) for d in key)
        return [model.evaluate(name, derivs, Points(xi, xn)) for model in self.models]

    def project(self, values_on_contour: np.ndarray, xn: np.ndarray, order: int) -> np.ndarray:
        """
        pi+ followed by ``order`` xi_n derivatives, for one xi' per row.

        Args:
            values_on_contour (np.ndarray): Shape (P, M, 8, 8) at the contour nodes.
            xn (np.ndarray): Shape (P,) or (Q,) target points.

        Returns:
            np.ndarray: Shape (P, Q, 8, 8).
        """
        return np.einsum("qm,pmab->pqab", self._kernel(xn, order), values_on_contour)

    def case_density(self, spec: CaseSpec, model: NumericSymbols) -> complex:
        """Density of one case in units of pi*Omega3 at the model's sample."""
        r_name, l_name = symbol_name(spec.r), symbol_name(spec.l)
        vertices = cell600_vertices()
        m = len(self._contour)
        total = 0j
        for start in range(0, len(vertices), _CHUNK):
            xi = vertices[start : start + _CHUNK]
            s = len(xi)
            contour = Points(np.repeat(xi, m, axis=0), np.tile(self._contour, s))
            grid = Points(np.repeat(xi, len(self._xn), axis=0), np.tile(self._xn, s))
            for t in product(TANGENTIAL, repeat=spec.alpha):
                r_derivs = ((Y, NORMAL_DIRECTION),) * spec.j + tuple((XI, d) for d in t)
                l_derivs = (
                    tuple((Y, d) for d in t)
                    + ((Y, NORMAL_DIRECTION),) * spec.k
                    + ((XI, NORMAL_DIRECTION),) * (spec.j + 1)
                )
                h = model.evaluate(r_name, r_derivs, contour).reshape(s, m, 8, 8)
                r = self.project(h, self._xn, spec.k)
                l = model.evaluate(l_name, l_derivs, grid).reshape(s, len(self._xn), 8, 8)
                trace = np.einsum("pqab,pqba->pq", r, l) / 2
                total += np.sum(trace * self._xn_weights[None, :])
        integral = total / len(vertices) * _SPHERE_VOLUME
        return to_complex(spec.coefficient) * integral / (2 * np.pi**3)

    def _verdict(self, oracle: List, engine: List, published: List) -> str:
        engine_ok = all(self._close_all(o, e) for o, e in zip(oracle, engine))
        published_ok = all(self._close_all(o, p) for o, p in zip(oracle, published))
        if engine_ok:
            return ENGINE_CONFIRMED
        if published_ok:
            return ENGINE_DEFECT
        return INCONCLUSIVE

    def _close_all(self, a, b) -> bool:
        a, b = np.asarray(a), np.asarray(b)
        scale = max(1.0, float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
        return float(np.max(np.abs(a - b), initial=0.0)) <= self.config.tolerance * scale

    def arbitrate_case(self, result: CaseResult, published: Poly) -> str:
        """Labels an engine/published case mismatch by the numeric value."""
        oracle = [self.case_density(result.spec, model) for model in self.models]
        engine = [s.scalar(result.density) for s in self.samples]
        stated = [s.scalar(published) for s in self.samples]
        verdict = self._verdict(oracle, engine, stated)
        logger.info(
            f"Oracle verdict for case {result.spec.number}: {verdict} "
            f"(oracle {oracle[0]:.10g}, engine {engine[0]:.10g}, published {stated[0]:.10g})"
        )
        return verdict

    def _lemma_points(self, count: int = 12) -> Tuple[np.ndarray, np.ndarray]:
        xi = self._rng.normal(size=(count, 4))
        xi /= np.linalg.norm(xi, axis=1)[:, None]
        return xi, self._rng.uniform(-2.0, 2.0, size=count)

    def ratxi_values(self, f: RatXi, sample: Sample, xi: np.ndarray, xn: np.ndarray) -> np.ndarray:
        """Evaluates an exact rational function at the points, shape (P, 8, 8)."""
        points = Points(xi, xn)
        xn = points.xn
        if f.restricted:
            denominator = (xn - 1j) ** f.minus * (xn + 1j) ** f.plus
        else:
            denominator = (np.sum(points.xi**2, axis=1) + xn**2) ** f.q
        result = np.zeros((len(points), 8, 8), dtype=complex)
        matrices = clifford_matrices()
        for mask, coeff in f.numerator:
            fn = _numpy_function(sample.expr(coeff))
            values = np.broadcast_to(np.asarray(fn(*points.args()), dtype=complex), (len(points),))
            result = result + (values / denominator)[:, None, None] * matrices[mask]
        return result

    def _projected_values(self, check: LemmaCheck, sample: Sample, xi: np.ndarray, xn: np.ndarray) -> np.ndarray:
        m = len(self._contour)
        h = self.ratxi_values(check.projected, sample, np.repeat(xi, m, axis=0), np.tile(self._contour, len(xi)))
        h = h.reshape(len(xi), m, 8, 8)
        kernel = self._kernel(xn, check.xi_n_order)
        return np.einsum("pm,pmab->pab", kernel, h)

    def arbitrate_lemma(self, check: LemmaCheck) -> str:
        """Labels a lemma-table mismatch by numeric symbol or projection values."""
        xi, xn = self._lemma_points()
        if check.symbol is not None:
            oracle = self.symbol_values(check.symbol, check.key, xi, xn)
        elif check.projected is not None:
            oracle = [self._projected_values(check, s, xi, xn) for s in self.samples]
        else:
            return INCONCLUSIVE
        engine = [self.ratxi_values(check.computed, s, xi, xn) for s in self.samples]
        stated = [self.ratxi_values(check.published, s, xi, xn) for s in self.samples]
        verdict = self._verdict(oracle, engine, stated)
        logger.info(f"Oracle verdict for {check.name}: {verdict}")
        return verdict
