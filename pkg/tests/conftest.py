from typing import Dict

import pytest

from boundary_residue.cases import CaseResult, enumerate_cases
from boundary_residue.jets import JetSymbol, MetricJet, build_metric_jet, derive_inverse_symbols
from boundary_residue.lemmas import symbol_table
from boundary_residue.models import PI_CUBED
from boundary_residue.pipeline import PipelineRun, ResiduePipeline, to_pi_omega3
from boundary_residue.theorem import assemble_theorem, boundary_relations
from symbolic.sphere import moment_conventions


@pytest.fixture(scope="session")
def metric() -> MetricJet:
    return build_metric_jet()


@pytest.fixture(scope="session")
def symbols(metric: MetricJet) -> Dict[str, JetSymbol]:
    return symbol_table(derive_inverse_symbols(metric))


@pytest.fixture
def loaded_pipeline() -> ResiduePipeline:
    pipeline = ResiduePipeline()
    assert pipeline.load_published_values()
    return pipeline


def _published_results(pipeline: ResiduePipeline) -> list:
    """Case results whose densities are the published values in pi*Omega3."""
    results = []
    for spec in enumerate_cases():
        value, unit = pipeline.published_case_value(spec.number)
        density = to_pi_omega3(value, PI_CUBED if spec.number == 3 else unit)
        results.append(CaseResult(spec=spec, density=density))
    return results


@pytest.fixture
def published_run(loaded_pipeline: ResiduePipeline) -> PipelineRun:
    """A run built from the published case values alone, without the engine."""
    results = loaded_pipeline.reconcile(_published_results(loaded_pipeline))
    total = loaded_pipeline.sum_boundary_density(results)
    return PipelineRun(
        results=results,
        total=total,
        theorems=[assemble_theorem(total.engine, "engine"), assemble_theorem(total.published, "published")],
        relations=boundary_relations(),
        moments=moment_conventions(),
        published=loaded_pipeline.published,
    )


@pytest.fixture(scope="session")
def engine_run() -> PipelineRun:
    pipeline = ResiduePipeline()
    return pipeline.run()
