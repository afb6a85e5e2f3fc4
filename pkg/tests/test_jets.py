from typing import Dict

import pytest

from boundary_residue.errors import MissingJetEntryError
from boundary_residue.jets import (
    JetSymbol,
    MetricJet,
    composition_residual,
    inverse_identity_residual,
    jet_derivative,
    jet_from_table,
    jet_product,
    key_label,
    keys_up_to,
    second_order_inverse_residual,
)
from symbolic.clifford import c_xi
from symbolic.ratxi import RatXi
from symbolic.scalars import H1, I_UNIT, XN


def test_keys_up_to_counts() -> None:
    assert len(keys_up_to(0)) == 1
    assert len(keys_up_to(1)) == 6
    assert len(keys_up_to(2)) == 21


def test_key_labels() -> None:
    assert key_label(()) == "value"
    assert key_label((5,)) == "dxn"
    assert key_label((1, 5)) == "dx1dxn"


def test_inverse_symbol_orders(symbols: Dict[str, JetSymbol]) -> None:
    assert [symbols[name].order for name in ("sigma-1", "sigma-2", "sigma-3")] == [2, 1, 0]


def test_value_of_q1(symbols: Dict[str, JetSymbol]) -> None:
    assert symbols["sigma-1"].value.equals(RatXi(c_xi().scale(I_UNIT), q=1))


def test_missing_entries_raise(symbols: Dict[str, JetSymbol]) -> None:
    with pytest.raises(MissingJetEntryError, match="not populated"):
        symbols["sigma-3"][(5,)]
    with pytest.raises(MissingJetEntryError):
        jet_derivative(symbols["sigma-1"], 0, (5,))
    with pytest.raises(MissingJetEntryError):
        symbols["sigma-3"].shift(5)


def test_keys_are_unordered(symbols: Dict[str, JetSymbol]) -> None:
    q1 = symbols["sigma-1"]
    assert q1[(5, 2)] is q1[(2, 5)]
    assert jet_derivative(q1, 1, (2,)) is q1[(2, 5)]


def test_leibniz_product() -> None:
    f = jet_from_table("f", 1, {(): RatXi.of(XN), (5,): RatXi.of(1)})
    g = jet_from_table("g", 1, {(): RatXi.of(H1), (1,): RatXi.of(XN)})
    fg = jet_product(f, g)
    assert fg[(5,)].equals(RatXi.of(H1))
    assert fg[(1,)].equals(RatXi.of(XN * XN))


def test_first_order_inverse_identity_holds(metric: MetricJet, symbols: Dict[str, JetSymbol]) -> None:
    assert inverse_identity_residual(metric, symbols["sigma-1"]) == {}


def test_second_order_metric_tables_disagree_in_the_normal_direction(
    metric: MetricJet, symbols: Dict[str, JetSymbol]
) -> None:
    residual = second_order_inverse_residual(metric, symbols["sigma-1"])
    assert (5, 5) in residual


def test_composition_residuals(metric: MetricJet, symbols: Dict[str, JetSymbol]) -> None:
    report = composition_residual(metric, symbols["sigma-1"], symbols["sigma-2"])
    assert report["order -1"] == {}
    assert all(len(key) == 2 for key in report["order 0"])
