from typing import Dict

import numpy as np
import pytest
from sympy import Rational

from boundary_residue.config import OracleConfig
from boundary_residue.jets import JetSymbol, MetricJet
from boundary_residue.oracle import (
    ENGINE_CONFIRMED,
    ENGINE_DEFECT,
    INCONCLUSIVE,
    NumericOracle,
    Sample,
    cell600_vertices,
    clifford_matrices,
    normalized_trace,
)
from symbolic.clifford import VOLUME
from symbolic.scalars import SB, SM


@pytest.fixture(scope="module")
def oracle(metric: MetricJet) -> NumericOracle:
    return NumericOracle(OracleConfig(samples=1, seed=3), metric)


def _points(count: int = 6):
    rng = np.random.default_rng(1)
    xi = rng.normal(size=(count, 4))
    xi /= np.linalg.norm(xi, axis=1)[:, None]
    return xi, rng.uniform(-2.0, 2.0, size=count)


def test_clifford_matrices() -> None:
    matrices = clifford_matrices()
    identity = np.eye(8)
    generators = [matrices[1 << k] for k in range(5)]
    for a, ea in enumerate(generators):
        assert np.allclose(ea @ ea, -identity)
        for eb in generators[a + 1 :]:
            assert np.allclose(ea @ eb, -(eb @ ea))
    assert abs(normalized_trace(matrices[VOLUME])) < 1e-12
    assert normalized_trace(identity) == pytest.approx(4)


def test_600_cell_is_a_design() -> None:
    vertices = cell600_vertices()
    assert vertices.shape == (120, 4)
    assert np.allclose(np.linalg.norm(vertices, axis=1), 1)
    assert np.mean(vertices[:, 0] ** 2) == pytest.approx(1 / 4)
    assert np.mean(vertices[:, 0] ** 4) == pytest.approx(1 / 8)
    assert np.mean(vertices[:, 0] ** 2 * vertices[:, 1] ** 2) == pytest.approx(1 / 24)


def test_sample_curvature_is_consistent() -> None:
    one, zero = Rational(1), Rational(0)
    shape = [[one if i == j else zero for j in range(4)] for i in range(4)]
    sample = Sample(h1=Rational(1, 2), h2=Rational(1), shape=shape)
    assert sample.scalar(SB) == pytest.approx(12)
    assert sample.scalar(SM) == pytest.approx(3 / 4 - 4 + 12)


@pytest.mark.parametrize("power, exact", [(1, np.pi), (3, 3 * np.pi / 8), (8, 3432 * np.pi / 4**7)])
def test_xn_quadrature_is_exact_for_lorentzian_powers(oracle: NumericOracle, power: int, exact: float) -> None:
    assert np.sum(oracle._xn_weights / (oracle._xn**2 + 1) ** power) == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("order", [0, 1])
def test_contour_projection_reproduces_an_h_plus_function(oracle: NumericOracle, order: int) -> None:
    contour = oracle._contour
    values = (1 / (contour - 1j) ** 2)[None, :, None, None] * np.eye(8)[None, None]
    xn = np.array([0.0, 1.5, -2.0])
    projected = oracle.project(values, xn, order)
    expected = 1 / (xn - 1j) ** 2 if order == 0 else -2 / (xn - 1j) ** 3
    assert np.allclose(projected[0, :, 0, 0], expected, atol=1e-10)
    assert np.allclose(projected[0, :, 0, 1], 0, atol=1e-10)


@pytest.mark.parametrize("name, key", [("sigma-1", ()), ("sigma-1", (5,)), ("sigma-1", (1, 2)), ("sigma-2", ())])
def test_numeric_symbols_agree_with_exact_jets(
    oracle: NumericOracle, symbols: Dict[str, JetSymbol], name: str, key
) -> None:
    xi, xn = _points()
    numeric = oracle.symbol_values(name, key, xi, xn)[0]
    exact = oracle.ratxi_values(symbols[name][key], oracle.samples[0], xi, xn)
    assert np.allclose(numeric, exact, atol=1e-9)


def test_verdicts(oracle: NumericOracle) -> None:
    assert oracle._verdict([1.0], [1.0], [2.0]) == ENGINE_CONFIRMED
    assert oracle._verdict([2.0], [1.0], [2.0]) == ENGINE_DEFECT
    assert oracle._verdict([3.0], [1.0], [2.0]) == INCONCLUSIVE
