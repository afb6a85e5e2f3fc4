import logging
from pathlib import Path

import pytest

from boundary_residue.errors import PipelineInvariantError
from boundary_residue.models import PI_CUBED, PI_OMEGA3
from boundary_residue.pipeline import (
    MATCH,
    MISMATCH,
    VANISHES,
    PipelineRun,
    ResiduePipeline,
    to_pi_omega3,
)
from symbolic.scalars import H1, H2, SB, ZERO, gauss


def test_load_published_values(loaded_pipeline: ResiduePipeline) -> None:
    published = loaded_pipeline.published
    assert published.schema_tag == "kkw5/1"
    assert len(published.cases) == 15
    value, unit = loaded_pipeline.published_case_value(3)
    assert (value, unit) == (SB * gauss("1/4"), PI_CUBED)


def test_load_missing_file_logs_error(caplog) -> None:
    pipeline = ResiduePipeline()
    with caplog.at_level(logging.ERROR):
        assert not pipeline.load_published_values("/nonexistent/published.json")
    assert "Failed to load published values" in caplog.text
    assert pipeline.published is None


@pytest.mark.parametrize("payload", [b"{", b'{"schema": "kkw5/1", "cases": 3}'])
def test_load_invalid_file(tmp_path: Path, payload: bytes) -> None:
    path = tmp_path / "published.json"
    path.write_bytes(payload)
    assert not ResiduePipeline().load_published_values(str(path))


def test_unit_conversion() -> None:
    assert to_pi_omega3(SB, PI_OMEGA3) == SB
    assert to_pi_omega3(SB, PI_CUBED) == SB * gauss("1/2")
    with pytest.raises(PipelineInvariantError, match="unknown density unit"):
        to_pi_omega3(SB, "pi^2")


def test_case_three_readings(published_run: PipelineRun) -> None:
    total = published_run.total
    assert total.published_cases_pi3.coeff(SB) == gauss("59/96", "3/32")
    assert total.published_cases_literal.coeff(SB) == gauss("71/96", "3/32")
    assert total.published_sum_reading == PI_OMEGA3
    assert total.engine_case_three_reading == PI_CUBED
    assert total.status == MISMATCH


def test_published_sum_over_the_other_generators(published_run: PipelineRun) -> None:
    total = published_run.total
    assert total.published.coeff(H1**2) == gauss("399/256")
    assert total.published.coeff(H2) == gauss("-29/32")
    assert total.engine.coeff(H1**2) == total.published.coeff(H1**2)


def test_reconcile_statuses(loaded_pipeline: ResiduePipeline, published_run: PipelineRun) -> None:
    by_number = {r.spec.number: r for r in published_run.results}
    assert by_number[1].status == VANISHES
    assert by_number[2].status == MATCH
    assert by_number[3].published_unit == PI_CUBED

    changed = by_number[7]
    changed.density = changed.density + SB
    loaded_pipeline.reconcile([changed])
    assert changed.status == MISMATCH
    assert changed.diff == SB
    assert changed.verdict is None


def test_sum_needs_all_cases(loaded_pipeline: ResiduePipeline, published_run: PipelineRun) -> None:
    with pytest.raises(PipelineInvariantError, match="fifteen"):
        loaded_pipeline.sum_boundary_density(published_run.results[:-1])


def test_published_theorem(loaded_pipeline: ResiduePipeline) -> None:
    assert loaded_pipeline.published_theorem() == {
        "K2": gauss("225/64"),
        "sM": gauss("29/4"),
        "sB": gauss("197/12", 3),
    }


@pytest.mark.slow
def test_engine_run_is_consistent(engine_run: PipelineRun) -> None:
    assert [r.spec.number for r in engine_run.results] == list(range(1, 16))
    assert engine_run.inverse_residual == {}
    assert engine_run.composition["order -1"] == {}
    assert [(p.case, p.partner) for p in engine_run.pairs] == [(6, 2), (10, 9), (12, 7), (15, 14)]
    assert all(p.holds for p in engine_run.pairs)
    assert all(not p.extra for p in engine_run.pairs)
    assert engine_run.total.engine == sum((r.density for r in engine_run.results), ZERO)


@pytest.mark.slow
@pytest.mark.parametrize("case, partner", [(6, 2), (10, 9), (12, 7), (15, 14)])
def test_extra_integrals_vanish(engine_run: PipelineRun, case: int, partner: int) -> None:
    pair = next(p for p in engine_run.pairs if (p.case, p.partner) == (case, partner))
    assert pair.extra == ZERO
    assert pair.values_equal
