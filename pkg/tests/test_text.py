import pytest

from symbolic.clifford import CliffElem, c_xi, e
from symbolic.errors import TextFormatError
from symbolic.ratxi import RatXi, restrict_to_unit_sphere
from symbolic.scalars import H1, H2, SB, XI, XN, ZERO, gauss, generator
from symbolic.text import (
    latex_poly,
    parse_cliff,
    parse_expression,
    parse_poly,
    parse_ratxi,
    render_expression,
    render_gauss,
    render_poly,
    render_ratxi,
)


@pytest.mark.parametrize(
    "value, text",
    [
        (gauss(0, 1), "i"),
        (gauss(1, -1), "(1-i)"),
        (gauss("-3/4"), "-3/4"),
        (gauss(0, "-1/2"), "-1/2*i"),
        (gauss(2, "3/2"), "(2+3/2*i)"),
    ],
)
def test_render_gauss(value, text: str) -> None:
    assert render_gauss(value) == text


def test_render_poly_single_terms() -> None:
    assert render_poly(ZERO) == "0"
    assert render_poly(-SB) == "-sB"
    assert render_poly(H1**2 * gauss("1/3")) == "1/3*h1^2"


def test_curvature_tokens_are_canonicalized() -> None:
    assert parse_poly("R[2,1,1,2]") == -generator("R_1_2_1_2")
    assert parse_poly("R[1,1,2,3]") == ZERO
    with pytest.raises(TextFormatError):
        parse_poly("R[1,2,3,5]")


def test_poly_round_trip() -> None:
    p = H1**2 * gauss(3, "-1/2") - H2 * XN + generator("R_1_3_2_4") * XI[1]
    assert parse_poly(render_poly(p)) == p


def test_parse_cliff_orders_monomials_with_sign() -> None:
    assert parse_cliff("e21") == -CliffElem.basis(1, 2)
    assert parse_cliff("h1*e1e5 + 2") == e(1).scale(H1) * e(5) + CliffElem.scalar(2)
    with pytest.raises(TextFormatError, match="products"):
        parse_cliff("e1*e2")


def test_ratxi_round_trip() -> None:
    values = [
        RatXi.of(c_xi(), q=2),
        restrict_to_unit_sphere(RatXi.of(c_xi().scale(H1), q=3)),
        RatXi(CliffElem.scalar(XN), minus=2, restricted=True),
        RatXi.of(H2),
    ]
    for value in values:
        parsed = parse_ratxi(render_ratxi(value))
        assert parsed.restricted == value.restricted
        assert parsed.equals(value)


def test_parse_ratxi_rejects_unknown_factor() -> None:
    with pytest.raises(TextFormatError):
        parse_ratxi("{1} / {(xn-2)^1}")
    with pytest.raises(TextFormatError):
        parse_ratxi("1 / Q")


def test_parse_expression_chooses_kind() -> None:
    assert render_expression(parse_expression("h1*h2 + h2*h1")) == "2*h1*h2"
    assert isinstance(parse_expression("h1*e3"), CliffElem)
    assert isinstance(parse_expression("{1} / {Q^1}"), RatXi)
    with pytest.raises(TextFormatError):
        parse_expression("h1 +* h2")


def test_latex_names() -> None:
    assert r"s_{\partial M}" in latex_poly(SB)
    assert "h'(0)" in latex_poly(H1)
