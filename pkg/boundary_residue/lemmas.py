"""Published symbol tables, entered by hand, and their comparison with the jets.

The published expressions are test vectors: the engine derives every symbol
from the metric jets, and each table here is only compared against it.
Mismatches become records, never exceptions.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence

from boundary_residue.jets import NORMAL_DIRECTION, JetSymbol, Key, key_label
from symbolic.clifford import CliffElem, c_xi, c_xi_prime, cl_product, e, monomial_label
from symbolic.curvature import curvature
from symbolic.ratxi import RatXi, dxi, pi_plus, restrict_to_unit_sphere
from symbolic.scalars import (
    H1,
    H2,
    I_UNIT,
    ONE,
    TANGENTIAL,
    XI,
    XI_PRIME_SQ,
    XN,
    ZERO,
    Poly,
    gauss,
    sphere_normal_form,
)

logger = logging.getLogger(__name__)

Symbols = Dict[str, JetSymbol]

CX = c_xi()
CP = c_xi_prime()
EN = e(NORMAL_DIRECTION)
DC = CP.scale(H1 * gauss("1/2"))
NORMAL_HESSIAN = H1**2 * gauss("3/4") - H2 * gauss("1/2")

MATCH = "match"
MISMATCH = "mismatch"


def _q(numerator: CliffElem, power: int, coeff: Poly = ONE) -> RatXi:
    return RatXi(numerator.scale(coeff), q=power)


def _t(numerator: CliffElem, minus: int, plus: int = 0, coeff: Poly = ONE) -> RatXi:
    return RatXi(numerator.scale(coeff), minus=minus, plus=plus, restricted=True)


def _total(parts: Sequence[RatXi]) -> RatXi:
    result = parts[0]
    for part in parts[1:]:
        result = result + part
    return result


def _restricted(f: RatXi) -> RatXi:
    return f if f.restricted else restrict_to_unit_sphere(f)


def _curvature_pair(t: int, i: int, j: int) -> Poly:
    """sum_l xi_l (R_tilj + R_tjli)."""
    total = ZERO
    for l in TANGENTIAL:
        total += XI[l - 1] * (curvature(t, i, l, j) + curvature(t, j, l, i))
    return total


def _curvature_quadric(i: int, j: int) -> Poly:
    """sum_{a,b} (R_iajb + R_ibja) xi_a xi_b."""
    total = ZERO
    for a, b in product(TANGENTIAL, repeat=2):
        total += (curvature(i, a, j, b) + curvature(i, b, j, a)) * XI[a - 1] * XI[b - 1]
    return total


def _connection(i: int) -> CliffElem:
    """sum_{b,s,a} R_bisa e_b e_s e_a."""
    total = CliffElem()
    for b, s, a in product(TANGENTIAL, repeat=3):
        r = curvature(b, i, s, a)
        if r:
            total = total + cl_product(e(b), e(s), e(a)).scale(r)
    return total


@dataclass(frozen=True)
class LemmaTable:
    """One published expression and the way to recompute it from the jets."""

    name: str
    description: str
    published: RatXi = field(repr=False)
    symbol: Optional[str] = None
    key: Key = ()
    # restricted input of pi+, followed by xi_n_order xi_n derivatives
    projected: Optional[Callable[[Symbols], RatXi]] = field(default=None, repr=False)
    xi_n_order: int = 0

    def computed(self, symbols: Symbols) -> RatXi:
        if self.projected is None:
            return symbols[self.symbol][self.key]
        f = pi_plus(self.projected(symbols))
        return dxi(f, "n", self.xi_n_order) if self.xi_n_order else f


@dataclass
class LemmaCheck:
    name: str
    description: str
    status: str
    computed: RatXi
    published: RatXi
    diff: Dict[str, RatXi]
    symbol: Optional[str] = None
    key: Key = ()
    verdict: Optional[str] = None
    projected: Optional[RatXi] = field(default=None, repr=False)
    xi_n_order: int = 0


def _sigma1_tables() -> List[LemmaTable]:
    n = NORMAL_DIRECTION
    tables = [
        LemmaTable(
            "sigma-1",
            "q-1 = i c(xi) / |xi|^2",
            _q(CX, 1, ONE * I_UNIT),
            "sigma-1",
            (),
        )
    ]
    for i in TANGENTIAL:
        tables.append(
            LemmaTable(
                f"sigma-1 dx{i}",
                "tangential first derivative of q-1 vanishes",
                RatXi.zero(),
                "sigma-1",
                (i,),
            )
        )
    tables.append(
        LemmaTable(
            "sigma-1 dxn",
            "normal first derivative of q-1",
            _q(DC, 1, ONE * I_UNIT) - _q(CX, 2, H1 * XI_PRIME_SQ * I_UNIT),
            "sigma-1",
            (n,),
        )
    )
    tables.append(
        LemmaTable(
            "sigma-1 dxn dxn",
            "second normal derivative of q-1",
            _total(
                [
                    _q(CP, 2, NORMAL_HESSIAN * I_UNIT),
                    _q(CX, 2, H2 * -I_UNIT),
                    _q(DC, 2, H1 * (-2 * I_UNIT)),
                    _q(CX, 3, H1**2 * (2 * I_UNIT)),
                ]
            ),
            "sigma-1",
            (n, n),
        )
    )
    third = gauss("1/3") * I_UNIT
    for i in TANGENTIAL:
        for j in TANGENTIAL:
            if j < i:
                continue
            hessian = CliffElem(
                {1 << (t - 1): _curvature_pair(t, i, j) * gauss("1/6") for t in TANGENTIAL}
            )
            published = _q(hessian, 1, ONE * I_UNIT) + _q(
                CX, 2, _curvature_quadric(i, j) * third
            )
            tables.append(
                LemmaTable(
                    f"sigma-1 dx{i} dx{j}",
                    "tangential second derivative of q-1",
                    published,
                    "sigma-1",
                    (i, j),
                )
            )
    return tables


def _sigma2_tables() -> List[LemmaTable]:
    n = NORMAL_DIRECTION
    cec = cl_product(CX, EN, CX)
    tables = [
        LemmaTable(
            "sigma-2",
            "value of q-2 at the boundary point",
            _total(
                [
                    _q(cec, 2, -H1),
                    _q(cl_product(CX, EN, DC), 2),
                    _q(cec, 3, -H1 * XI_PRIME_SQ),
                ]
            ),
            "sigma-2",
            (),
        )
    ]
    for i in TANGENTIAL:
        parts = [_q(cl_product(CX, _connection(i), CX), 2, ONE * gauss("1/8"))]
        for j, t in product(TANGENTIAL, repeat=2):
            coeff = _curvature_pair(t, i, j)
            if coeff:
                parts.append(
                    _q(cl_product(CX, e(j), e(t)), 2, coeff * gauss("1/6"))
                )
        for j in TANGENTIAL:
            coeff = _curvature_quadric(i, j)
            if coeff:
                parts.append(_q(cl_product(CX, e(j), CX), 3, coeff * gauss("1/3")))
        tables.append(
            LemmaTable(
                f"sigma-2 dx{i}",
                "tangential derivative of q-2",
                _total(parts),
                "sigma-2",
                (i,),
            )
        )
    tables.append(
        LemmaTable(
            "sigma-2 dxn",
            "normal derivative of q-2",
            _total(
                [
                    _q(cl_product(DC, EN, CX), 2, -H1),
                    _q(cl_product(DC, EN, CX), 3, -H1),
                    _q(cec, 2, H1**2 - H2),
                    _q(cec, 3, 2 * H1**2 - H2),
                    _q(cec, 4, 3 * H1**2),
                    _q(cl_product(CX, EN, DC), 2, -H1),
                    _q(cl_product(CX, EN, DC), 3, -3 * H1),
                    _q(cl_product(DC, EN, DC), 2),
                    _q(cl_product(CX, EN, CP), 3, NORMAL_HESSIAN),
                ]
            ),
            "sigma-2",
            (n,),
        )
    )
    return tables


def _sigma3_table() -> LemmaTable:
    i_ = ONE * I_UNIT
    five = cl_product(CX, EN, CX, EN, CX)
    parts = [
        _q(five, 3, -i_ * H1**2),
        _q(cl_product(CX, EN, CX, EN, DC), 3, i_ * H1),
        _q(five, 4, -i_ * H1**2),
    ]
    for i in TANGENTIAL:
        parts.append(
            _q(cl_product(CX, e(i), CX, _connection(i), CX), 3, -i_ * gauss("1/8"))
        )
        for j, t in product(TANGENTIAL, repeat=2):
            coeff = _curvature_pair(t, i, j)
            if coeff:
                parts.append(
                    _q(
                        cl_product(CX, e(i), CX, e(j), e(t)),
                        3,
                        -i_ * coeff * gauss("1/6"),
                    )
                )
        for j in TANGENTIAL:
            coeff = _curvature_quadric(i, j)
            if coeff:
                parts.append(
                    _q(cl_product(CX, e(i), CX, e(j), CX), 4, -i_ * coeff * gauss("1/3"))
                )
    middle = cl_product(CX, EN, DC, EN, CX)
    right = cl_product(CX, EN, CX, EN, DC)
    parts += [
        _q(middle, 3, i_ * H1),
        _q(middle, 4, i_ * H1),
        _q(five, 3, -i_ * (H1**2 - H2)),
        _q(five, 4, -i_ * (2 * H1**2 - H2)),
        _q(five, 5, -i_ * 3 * H1**2),
        _q(right, 3, i_ * H1),
        _q(right, 4, i_ * 3 * H1),
        _q(cl_product(CX, EN, DC, EN, DC), 3, -i_),
        _q(cl_product(CX, EN, CX, EN, CP), 4, -i_ * NORMAL_HESSIAN),
    ]
    return LemmaTable(
        "sigma-3",
        "value of q-3 at the boundary point",
        _total(parts),
        "sigma-3",
        (),
    )


@lru_cache(maxsize=None)
def published_lemmas() -> List[LemmaTable]:
    """All published symbol tables, in display order."""
    tables = _sigma1_tables() + _sigma2_tables() + [_sigma3_table()]
    logger.debug(f"Entered {len(tables)} published symbol tables")
    return tables


def _in_xn(*coeffs) -> Poly:
    """c0 + c1 xn + c2 xn^2 + ... with Gaussian-rational coefficients."""
    total = ZERO
    for k, c in enumerate(coeffs):
        total += XN**k * c
    return total


def _pi_plus_tables() -> List[LemmaTable]:
    n = NORMAL_DIRECTION
    half, quarter, sixteenth = gauss("1/2"), gauss("1/4"), gauss("1/16")
    i_ = ONE * I_UNIT
    cp_ie = CP + EN.scale(i_)
    two_i_minus = _in_xn(gauss(0, 2), gauss(-1))
    cubic = _in_xn(gauss(0, 8), gauss(-9), gauss(0, -3))
    linear = _in_xn(gauss(-3), gauss(0, -1))

    def q1(key: Key = ()) -> Callable[[Symbols], RatXi]:
        return lambda symbols: _restricted(symbols["sigma-1"][key])

    b1 = _total(
        [
            _t(cl_product(CP, EN, CP), 2, coeff=H1 * _in_xn(gauss(2), gauss(0, 1)) * quarter),
            _t(CP, 2, coeff=H1 * gauss(0, "-1/2")),
            _t(EN, 2, coeff=H1 * XN * gauss(0, "-1/4")),
            _t(DC, 2, coeff=ONE * gauss(0, "1/4")),
            _t(cl_product(CP, EN, DC), 2, coeff=_in_xn(gauss(-2), gauss(0, -1)) * quarter),
        ]
    )
    b2 = _total(
        [
            _t(EN, 1, coeff=H1 * gauss(0, "-1/8")),
            _t(EN - CP.scale(i_), 2, coeff=H1 * sixteenth),
            _t(CP.scale(i_) - EN, 3, coeff=H1 * _in_xn(gauss(0, -7), gauss(3)) * sixteenth),
        ]
    )
    return [
        LemmaTable(
            "pi+[c/Q^2]",
            "projection of c(xi) / |xi|^4",
            _t(CP, 1, coeff=ONE * gauss(0, "-1/4")) + _t(cp_ie, 2, coeff=ONE * -quarter),
            projected=lambda _: restrict_to_unit_sphere(_q(CX, 2)),
        ),
        LemmaTable(
            "pi+[1/Q^2]",
            "projection of 1 / |xi|^4",
            _t(CliffElem.scalar(_in_xn(gauss(-2), gauss(0, -1)) * quarter), 2),
            projected=lambda _: (
                restrict_to_unit_sphere(_q(CliffElem.scalar(ONE), 2))
            ),
        ),
        LemmaTable(
            "pi+[c/Q^3]",
            "projection of c(xi) / |xi|^6",
            _t(CP, 3, coeff=cubic * sixteenth) + _t(EN, 3, coeff=linear * sixteenth),
            projected=lambda _: restrict_to_unit_sphere(_q(CX, 3)),
        ),
        LemmaTable(
            "pi+ dxn sigma-1",
            "projection of the normal derivative of q-1",
            _total(
                [
                    _t(DC, 1, coeff=ONE * half),
                    _t(CP, 1, coeff=H1 * -quarter),
                    _t(cp_ie, 2, coeff=H1 * gauss(0, "1/4")),
                ]
            ),
            projected=q1((n,)),
        ),
        LemmaTable(
            "pi+ dxn dxn sigma-1",
            "projection of the second normal derivative of q-1",
            _total(
                [
                    _t(CP, 1, coeff=NORMAL_HESSIAN * half),
                    _t(DC, 2, coeff=H1 * two_i_minus * half),
                    _t(CP, 2, coeff=H2 * two_i_minus * quarter),
                    _t(EN, 2, coeff=H2 * -quarter),
                    _t(CP, 3, coeff=H1**2 * cubic * gauss(0, "1/8")),
                    _t(EN, 3, coeff=H1**2 * linear * gauss(0, "1/8")),
                ]
            ),
            projected=q1((n, n)),
        ),
        LemmaTable(
            "pi+ dxi1 sigma-1",
            "projection of the xi_1 derivative of q-1",
            _total(
                [
                    _t(e(1), 1, coeff=ONE * half),
                    _t(CP, 2, coeff=XI[0] * two_i_minus * half),
                    _t(EN, 2, coeff=XI[0] * -half),
                ]
            ),
            projected=lambda symbols: (
                restrict_to_unit_sphere(dxi(symbols["sigma-1"].value, 1))
            ),
        ),
        LemmaTable(
            "pi+ dxi1 dxi2 sigma-1",
            "projection of a mixed tangential xi derivative of q-1",
            _total(
                [
                    _t(e(1), 2, coeff=XI[1] * two_i_minus * half),
                    _t(e(2), 2, coeff=XI[0] * two_i_minus * half),
                    _t(
                        CP,
                        3,
                        coeff=XI[0] * XI[1] * _in_xn(gauss(-8), gauss(0, -9), gauss(3)) * half,
                    ),
                    _t(EN, 3, coeff=XI[0] * XI[1] * _in_xn(gauss(0, -3), gauss(1)) * half),
                ]
            ),
            projected=lambda symbols: (
                restrict_to_unit_sphere(dxi(dxi(symbols["sigma-1"].value, 1), 2))
            ),
        ),
        LemmaTable(
            "pi+ dxi1 dxi1 sigma-1",
            "projection of a repeated tangential xi derivative of q-1",
            _total(
                [
                    _t(e(1), 2, coeff=XI[0] * two_i_minus),
                    _t(CP, 2, coeff=two_i_minus * half),
                    _t(EN, 2, coeff=ONE * -half),
                    _t(
                        CP,
                        3,
                        coeff=XI[0] ** 2 * _in_xn(gauss(-8), gauss(0, -9), gauss(3)) * half,
                    ),
                    _t(EN, 3, coeff=XI[0] ** 2 * _in_xn(gauss(0, -3), gauss(1)) * half),
                ]
            ),
            projected=lambda symbols: (
                restrict_to_unit_sphere(dxi(symbols["sigma-1"].value, 1, 2))
            ),
        ),
        LemmaTable(
            "dxin pi+ sigma-1",
            "xi_n derivative of the projection of q-1",
            _t(cp_ie, 2, coeff=ONE * -half),
            projected=q1(),
            xi_n_order=1,
        ),
        LemmaTable(
            "dxin dxin pi+ sigma-1",
            "second xi_n derivative of the projection of q-1",
            _t(CP, 3) + _t(EN, 3, coeff=ONE * gauss(0, "1/2")),
            projected=q1(),
            xi_n_order=2,
        ),
        LemmaTable(
            "dxin dxin pi+ dxn sigma-1",
            "second xi_n derivative of the projection of the normal derivative of q-1",
            _total(
                [
                    _t(DC, 3),
                    _t(CP, 4, coeff=H1 * _in_xn(gauss(0, 4), gauss(-1)) * half),
                    _t(EN, 4, coeff=H1 * gauss("-3/2")),
                ]
            ),
            projected=q1((n,)),
            xi_n_order=2,
        ),
        LemmaTable(
            "pi+ sigma-2",
            "projection of q-2",
            b1 - b2,
            projected=lambda symbols: _restricted(symbols["sigma-2"].value),
        ),
    ]


@lru_cache(maxsize=None)
def published_pi_plus() -> List[LemmaTable]:
    """Published Cauchy projections and their xi_n derivatives."""
    return _pi_plus_tables()


def symbol_table(symbols: Sequence[JetSymbol]) -> Symbols:
    return {s.name: s for s in symbols}


def lemma_diff(computed: RatXi, published: RatXi) -> Dict[str, RatXi]:
    """
    Splits computed - published by Clifford monomial, modulo |xi'| = 1.

    Returns:
        Dict[str, RatXi]: Nonvanishing components keyed by monomial label.
    """
    delta = _restricted(computed) - _restricted(published)
    diff: Dict[str, RatXi] = {}
    for mask, coeff in delta.numerator:
        reduced = sphere_normal_form(coeff)
        if reduced:
            diff[monomial_label(mask)] = RatXi(
                CliffElem({mask: reduced}),
                minus=delta.minus,
                plus=delta.plus,
                restricted=True,
            ).reduced()
    return diff


def check_table(table: LemmaTable, symbols: Symbols) -> LemmaCheck:
    computed = table.computed(symbols)
    diff = lemma_diff(computed, table.published)
    status = MISMATCH if diff else MATCH
    if diff:
        logger.warning(
            f"Published {table.name} differs from the recomputed value in: {', '.join(diff)}"
        )
    else:
        logger.debug(f"Published {table.name} matches")
    return LemmaCheck(
        name=table.name,
        description=table.description,
        status=status,
        computed=computed,
        published=table.published,
        diff=diff,
        symbol=table.symbol,
        key=table.key,
        projected=table.projected(symbols) if table.projected else None,
        xi_n_order=table.xi_n_order,
    )


def verify_lemma_tables(symbols: Sequence[JetSymbol]) -> List[LemmaCheck]:
    """
    Compares every recomputed symbol entry with its published table.

    Args:
        symbols (Sequence[JetSymbol]): q-1, q-2 and q-3 from derive_inverse_symbols.

    Returns:
        List[LemmaCheck]: One record per table; mismatches carry a monomial diff.
    """
    table = symbol_table(symbols)
    checks = [check_table(t, table) for t in published_lemmas()]
    failed = [c.name for c in checks if c.status == MISMATCH]
    logger.info(f"Checked {len(checks)} symbol tables, {len(failed)} mismatched")
    return checks


def verify_pi_plus_table(symbols: Sequence[JetSymbol]) -> List[LemmaCheck]:
    table = symbol_table(symbols)
    checks = [check_table(t, table) for t in published_pi_plus()]
    failed = [c.name for c in checks if c.status == MISMATCH]
    logger.info(f"Checked {len(checks)} projections, {len(failed)} mismatched")
    return checks


def entry_label(check: LemmaCheck) -> str:
    if check.symbol is None:
        return check.name
    return f"{check.symbol} {key_label(check.key)}"
