import pytest

from boundary_residue.errors import PipelineInvariantError
from boundary_residue.theorem import (
    assemble_theorem,
    boundary_relations,
    density_coefficients,
    density_from_coefficients,
)
from symbolic.scalars import H1, H2, K_EXT, SB, SM, XN, gauss

# the published density sum over {h1^2, h2, sB}, in units of pi*Omega3
PUBLISHED_SUM = H1**2 * gauss("399/256") - H2 * gauss("29/32") + SB * gauss("71/96", "3/32")


def test_boundary_relations() -> None:
    relations = boundary_relations()
    assert relations.scalar_curvature == H1**2 * 3 - H2 * 4 + SB
    assert relations.extrinsic_curvature == H1 * -2
    assert relations.boundary_term == H1 * -4


def test_published_sum_assembles_to_the_derived_coefficients() -> None:
    theorem = assemble_theorem(PUBLISHED_SUM, "published")
    assert theorem.coefficients() == {
        "K2": gauss("225/32"),
        "sM": gauss("29/4"),
        "sB": gauss("197/12", 3),
    }
    assert theorem.source == "published"
    assert theorem.as_poly() == K_EXT**2 * gauss("225/32") + SM * gauss("29/4") + SB * gauss("197/12", 3)


def test_intermediate_form() -> None:
    theorem = assemble_theorem(PUBLISHED_SUM)
    assert density_coefficients(theorem.intermediate) == {
        "h1sq": gauss("399/16"),
        "h2": gauss("-29/2"),
        "sB": gauss("71/6", "3/2"),
    }


def test_stray_monomials_are_rejected() -> None:
    with pytest.raises(PipelineInvariantError, match="basis"):
        assemble_theorem(PUBLISHED_SUM + XN)
    with pytest.raises(PipelineInvariantError):
        assemble_theorem(H1 * SB)


def test_density_coefficients_round_trip() -> None:
    values = density_coefficients(PUBLISHED_SUM)
    assert density_from_coefficients(values) == PUBLISHED_SUM
    assert density_from_coefficients({"sB": gauss(1)}) == SB
