import logging
from typing import Dict, List

import pytest

from boundary_residue.jets import JetSymbol
from boundary_residue.lemmas import (
    MATCH,
    MISMATCH,
    LemmaCheck,
    entry_label,
    lemma_diff,
    verify_lemma_tables,
    verify_pi_plus_table,
)
from symbolic.ratxi import RatXi
from symbolic.scalars import H1, XI, XI_PRIME_SQ


@pytest.fixture(scope="module")
def lemma_checks(symbols: Dict[str, JetSymbol]) -> Dict[str, LemmaCheck]:
    return {c.name: c for c in verify_lemma_tables(list(symbols.values()))}


@pytest.fixture(scope="module")
def projection_checks(symbols: Dict[str, JetSymbol]) -> Dict[str, LemmaCheck]:
    return {c.name: c for c in verify_pi_plus_table(list(symbols.values()))}


def _matching(checks: Dict[str, LemmaCheck]) -> List[str]:
    return [name for name, check in checks.items() if check.status == MATCH]


@pytest.mark.parametrize(
    "name",
    [
        "sigma-1",
        "sigma-1 dxn",
        "sigma-1 dx1",
        "sigma-1 dx4",
        "sigma-1 dx1 dx2",
        "sigma-1 dx3 dx3",
        "sigma-2",
        "sigma-2 dx2",
    ],
)
def test_symbol_tables_that_match(lemma_checks: Dict[str, LemmaCheck], name: str) -> None:
    assert lemma_checks[name].status == MATCH
    assert lemma_checks[name].diff == {}


@pytest.mark.parametrize("name", ["sigma-1 dxn dxn", "sigma-2 dxn", "sigma-3"])
def test_symbol_tables_that_differ(lemma_checks: Dict[str, LemmaCheck], name: str) -> None:
    check = lemma_checks[name]
    assert check.status == MISMATCH
    assert check.diff


def test_every_tangential_pair_is_checked(lemma_checks: Dict[str, LemmaCheck]) -> None:
    pairs = [name for name in lemma_checks if name.startswith("sigma-1 dx") and name.count("dx") == 2]
    # ten tangential pairs plus the second normal derivative
    assert len(pairs) == 11


def test_projection_table(projection_checks: Dict[str, LemmaCheck]) -> None:
    matching = set(_matching(projection_checks))
    for name in [
        "pi+[c/Q^2]",
        "pi+[1/Q^2]",
        "pi+[c/Q^3]",
        "pi+ dxn sigma-1",
        "pi+ dxn dxn sigma-1",
        "pi+ dxi1 sigma-1",
        "pi+ dxi1 dxi2 sigma-1",
        "pi+ dxi1 dxi1 sigma-1",
        "dxin pi+ sigma-1",
        "dxin dxin pi+ dxn sigma-1",
    ]:
        assert name in matching


def test_second_xi_n_derivative_of_projection_differs_in_e5(
    projection_checks: Dict[str, LemmaCheck],
) -> None:
    check = projection_checks["dxin dxin pi+ sigma-1"]
    assert check.status == MISMATCH
    assert "e5" in check.diff
    assert check.projected is not None and check.xi_n_order == 2


def test_mismatches_are_logged(symbols: Dict[str, JetSymbol], caplog) -> None:
    with caplog.at_level(logging.WARNING, logger="boundary_residue.lemmas"):
        verify_lemma_tables(list(symbols.values()))
    assert "sigma-3" in caplog.text


def test_lemma_diff_works_modulo_the_unit_sphere() -> None:
    assert lemma_diff(RatXi.of(H1 * XI_PRIME_SQ, q=1), RatXi.of(H1, q=1)) == {}
    assert set(lemma_diff(RatXi.of(XI[0], q=1), RatXi.zero())) == {"1"}


def test_entry_label(lemma_checks: Dict[str, LemmaCheck], projection_checks: Dict[str, LemmaCheck]) -> None:
    assert entry_label(lemma_checks["sigma-1 dxn"]) == "sigma-1 dxn"
    assert entry_label(projection_checks["pi+ sigma-2"]) == "pi+ sigma-2"
