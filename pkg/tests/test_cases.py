import pytest

from boundary_residue.cases import (
    CaseResult,
    CaseSpec,
    case_by_number,
    check_density,
    enumerate_cases,
    to_density,
    trace_integral,
)
from boundary_residue.errors import PipelineInvariantError
from boundary_residue.pipeline import PipelineRun
from symbolic.clifford import CliffElem
from symbolic.ratxi import RatXi
from symbolic.scalars import H1, ONE, SB, XN, ZERO, gauss


def test_fifteen_cases_in_publication_order() -> None:
    specs = enumerate_cases()
    assert [s.number for s in specs] == list(range(1, 16))
    assert [(s.r, s.l) for s in specs[:6]] == [(-1, -1)] * 6
    assert specs[6].label == "(-1,-2,0,1,0)"
    assert specs[12].label == "(-2,-2,0,0,0)"
    assert specs[14].label == "(-3,-1,0,0,0)"


def test_orders_add_up_to_the_boundary_order() -> None:
    for spec in enumerate_cases():
        assert -spec.r - spec.l + spec.k + spec.j + spec.alpha == 4


@pytest.mark.parametrize(
    "number, coefficient",
    [
        (1, gauss(0, "1/2")),
        (3, gauss(0, "1/2")),
        (6, gauss(0, "1/6")),
        (7, gauss("-1/2")),
        (13, gauss(0, -1)),
    ],
)
def test_case_coefficient(number: int, coefficient) -> None:
    assert case_by_number(number).coefficient == coefficient


def test_inconsistent_orders_are_rejected() -> None:
    with pytest.raises(PipelineInvariantError, match="do not add up"):
        CaseSpec(1, -1, -1, 0, 0, 0)


def test_unknown_case_number() -> None:
    with pytest.raises(PipelineInvariantError):
        case_by_number(16)


def test_trace_integral_over_the_xn_line() -> None:
    a = RatXi(CliffElem.scalar(1), minus=1, restricted=True)
    b = RatXi(CliffElem.scalar(1), plus=1, restricted=True)
    trace, volume = trace_integral([(a, b), (RatXi.zero(True), b)])
    assert trace == ONE * 4
    assert volume == ZERO


def test_density_units() -> None:
    # sphere area 2 pi^2 times pi, divided by pi*Omega3 = 2 pi^3
    assert to_density(gauss(1), ONE) == ONE
    assert to_density(gauss(0, 2), H1**2) == H1**2 * gauss(0, 2)


def test_case_result_defaults() -> None:
    first = CaseResult(spec=case_by_number(2), density=SB)
    second = CaseResult(spec=case_by_number(4), density=H1**2)
    assert first.volume_part == ZERO
    assert second.volume_part == ZERO
    assert first.status is None and first.published_unit == "pi*Omega3"


def test_density_must_stay_in_the_basis() -> None:
    spec = case_by_number(2)
    check_density(spec, H1**2 + SB)
    with pytest.raises(PipelineInvariantError, match="basis"):
        check_density(spec, H1 * XN)


@pytest.mark.slow
@pytest.mark.parametrize("number", [1, 5, 11])
def test_vanishing_cases(engine_run: PipelineRun, number: int) -> None:
    result = next(r for r in engine_run.results if r.spec.number == number)
    assert result.density == ZERO
