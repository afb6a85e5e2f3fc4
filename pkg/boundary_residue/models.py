"""Report and fixture records.

Coefficients with a zero imaginary part serialize as ``[num, den]``; others
as ``{"re": [num, den], "im": [num, den]}``.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from boundary_residue.theorem import density_coefficients, density_from_coefficients
from symbolic.scalars import GaussRat, Poly, gauss, gauss_parts

PI_OMEGA3 = "pi*Omega3"
PI_CUBED = "pi^3"
THEOREM_UNIT = "pi^3/16"

FractionPair = Tuple[int, int]


class ComplexCoefficient(BaseModel):
    re: FractionPair
    im: FractionPair


Coefficient = Union[FractionPair, ComplexCoefficient]

ZERO_COEFFICIENT: FractionPair = (0, 1)


def _pair(q: Fraction) -> FractionPair:
    return (q.numerator, q.denominator)


def encode_coefficient(z: GaussRat) -> Coefficient:
    re, im = gauss_parts(z)
    if not im:
        return _pair(re)
    return ComplexCoefficient(re=_pair(re), im=_pair(im))


def decode_coefficient(c: Coefficient) -> GaussRat:
    if isinstance(c, ComplexCoefficient):
        return gauss(Fraction(*c.re), Fraction(*c.im))
    return gauss(Fraction(*c))


class Density(BaseModel):
    """A boundary density over h1^2, h2 and sB."""

    h1sq: Coefficient = ZERO_COEFFICIENT
    h2: Coefficient = ZERO_COEFFICIENT
    sB: Coefficient = ZERO_COEFFICIENT

    @classmethod
    def from_poly(cls, p: Poly) -> "Density":
        return cls(**{k: encode_coefficient(v) for k, v in density_coefficients(p).items()})

    def to_poly(self) -> Poly:
        values = {"h1sq": self.h1sq, "h2": self.h2, "sB": self.sB}
        return density_from_coefficients({k: decode_coefficient(v) for k, v in values.items()})


# Published fixtures


class PublishedCase(BaseModel):
    case: int
    value: Density
    unit: str = PI_OMEGA3


class PublishedTheorem(BaseModel):
    K2: Coefficient
    sM: Coefficient
    sB: Coefficient


class PublishedValues(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_tag: str = Field(alias="schema")
    cases: List[PublishedCase]
    sum: Density
    intermediate: Density
    theorem: PublishedTheorem

    def case(self, number: int) -> Optional[PublishedCase]:
        for c in self.cases:
            if c.case == number:
                return c
        return None


# Report


class CaseRecord(BaseModel):
    case: int
    value: Density
    unit: str = PI_OMEGA3
    status: str
    spec: str
    published_value: Optional[Density] = None
    published_unit: Optional[str] = None
    diff: Optional[Density] = None
    oracle_verdict: Optional[str] = None
    grade5_residue: Optional[str] = None


class SumRecord(BaseModel):
    engine: Density
    unit: str = PI_OMEGA3
    published: Density
    published_cases_pi3: Density
    published_cases_literal: Density
    engine_case_three_reading: Optional[str] = None
    published_sum_reading: Optional[str] = None
    status: str


class TheoremRecord(BaseModel):
    source: str
    unit: str = THEOREM_UNIT
    K2: Coefficient
    sM: Coefficient
    sB: Coefficient
    intermediate: Density
    status: str


class RelationsRecord(BaseModel):
    scalar_curvature: str
    extrinsic_curvature: str
    boundary_term: str


class LemmaRecord(BaseModel):
    name: str
    table: str
    description: str
    status: str
    diff: Dict[str, str] = Field(default_factory=dict)
    oracle_verdict: Optional[str] = None


class IdentityRecord(BaseModel):
    pair: Tuple[int, int]
    extra_integral: Density
    difference: Density
    sign: int
    holds: bool
    values_equal: bool


class ResidualRecord(BaseModel):
    check: str
    entries: List[str] = Field(default_factory=list)


class Deviation(BaseModel):
    kind: str
    subject: str
    detail: str
    documented: bool


class Report(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_tag: str = Field(alias="schema")
    cases: List[CaseRecord]
    sum: SumRecord
    theorems: List[TheoremRecord]
    relations: RelationsRecord
    lemmas: List[LemmaRecord] = Field(default_factory=list)
    identities: List[IdentityRecord] = Field(default_factory=list)
    residuals: List[ResidualRecord] = Field(default_factory=list)
    moments: Dict[str, Dict[str, Coefficient]] = Field(default_factory=dict)
    deviations: List[Deviation] = Field(default_factory=list)


class ShownEntry(BaseModel):
    label: str
    text: str
    latex: Optional[str] = None


class Intermediate(BaseModel):
    """One named intermediate printed by ``show``."""

    model_config = ConfigDict(populate_by_name=True)

    schema_tag: str = Field(alias="schema")
    target: str
    entries: List[ShownEntry] = Field(default_factory=list)
