"""Plain-text and LaTeX forms of polynomials, Clifford elements and RatXi.

Grammar: ``coeff*gen^k*...`` with ``i`` the imaginary unit, generators ``x1``..
``x4``, ``xn``, ``h1``, ``h2``, ``sB``, ``sM``, ``K`` and ``R[a,b,c,d]``.
Clifford monomials are written ``e1e3e5``; a rational function is written
``{numerator} / {Q^a*(xn-i)^b*(xn+i)^c}``.
"""

import logging
import re
from fractions import Fraction
from typing import Dict, List, Union

from sympy import Add, I, Symbol, expand, latex
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

from symbolic.clifford import CliffElem, indices_mask, mask_indices, monomial_label
from symbolic.curvature import canonicalize_curvature
from symbolic.errors import TextFormatError
from symbolic.ratxi import RatXi
from symbolic.scalars import (
    CURVATURE_INDICES,
    GENERATOR_NAMES,
    RING,
    GaussRat,
    Poly,
    curvature_name,
    gauss_parts,
)

logger = logging.getLogger(__name__)

_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_SYMBOLS: Dict[str, Symbol] = {name: Symbol(name) for name in GENERATOR_NAMES}
_CURVATURE_TOKEN = re.compile(r"R\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")
_CLIFFORD_TOKEN = re.compile(r"(?<![A-Za-z0-9_])(e[1-5]+(?:e[1-5]+)*)(?![A-Za-z0-9_])")
_RATXI_FORM = re.compile(r"^\s*\{(.*)\}\s*/\s*\{(.*)\}\s*$", re.S)
_DENOMINATOR_TOKEN = re.compile(r"^(Q|\(xn-i\)|\(xn\+i\))\^(\d+)$")


def _fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render_gauss(z: GaussRat) -> str:
    re_part, im_part = gauss_parts(z)
    if not im_part:
        return _fraction(re_part)
    imag = "i" if abs(im_part) == 1 else f"{_fraction(abs(im_part))}*i"
    if not re_part:
        return f"-{imag}" if im_part < 0 else imag
    sign = "-" if im_part < 0 else "+"
    return f"({_fraction(re_part)}{sign}{imag})"


def _generator_token(name: str) -> str:
    if name.startswith("R_"):
        return "R[" + name[2:].replace("_", ",") + "]"
    return name


def render_poly(p: Poly) -> str:
    """Renders ``p`` with terms in ring order."""
    if not p:
        return "0"
    pieces: List[str] = []
    for monom, coeff in p.terms():
        factors = [
            _generator_token(name) + (f"^{k}" if k > 1 else "")
            for name, k in zip(GENERATOR_NAMES, monom)
            if k
        ]
        head = render_gauss(coeff)
        if not factors:
            term = head
        elif head == "1":
            term = "*".join(factors)
        elif head == "-1":
            term = "-" + "*".join(factors)
        else:
            term = head + "*" + "*".join(factors)
        pieces.append(term)
    text = pieces[0]
    for term in pieces[1:]:
        text += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return text


def _expand_curvature(text: str) -> str:
    def replace(match: "re.Match") -> str:
        a, b, c, d = (int(g) for g in match.groups())
        try:
            sign, idx = canonicalize_curvature(a, b, c, d)
        except ValueError as e:
            raise TextFormatError(str(e)) from e
        if idx is None:
            return "0"
        return f"({render_gauss(sign)}*{curvature_name(idx)})"

    return _CURVATURE_TOKEN.sub(replace, text)


def _to_expr(text: str, extra: Dict[str, Symbol] = None):
    local = dict(_SYMBOLS)
    local["i"] = I
    local.update(extra or {})
    try:
        return parse_expr(
            _expand_curvature(text), local_dict=local, transformations=_TRANSFORMATIONS
        )
    except TextFormatError:
        raise
    except Exception as e:
        raise TextFormatError(f"cannot parse expression {text!r}: {e}") from e


def _to_poly(expr, text: str) -> Poly:
    try:
        return RING.from_expr(expr)
    except ValueError as e:
        raise TextFormatError(f"not a polynomial: {text!r}") from e


def parse_poly(text: str) -> Poly:
    return _to_poly(_to_expr(text), text)


def render_cliff(a: CliffElem) -> str:
    if not a:
        return "0"
    pieces = []
    for mask, coeff in a:
        body = f"({render_poly(coeff)})"
        if mask:
            body += "*" + monomial_label(mask)
        pieces.append(body)
    return " + ".join(pieces)


def parse_cliff(text: str) -> CliffElem:
    """Parses a sum of ``coeff*monomial`` terms into a Clifford element."""
    placeholders: Dict[str, Symbol] = {}

    def replace(match: "re.Match") -> str:
        sign, mask = indices_mask(int(ch) for ch in match.group(1) if ch != "e")
        name = f"E_{mask}"
        placeholders.setdefault(name, Symbol(name))
        return f"({sign}*{name})"

    expr = expand(_to_expr(_CLIFFORD_TOKEN.sub(replace, text), placeholders))
    markers = list(placeholders.values())
    for term in Add.make_args(expr):
        powers = term.as_powers_dict()
        if sum(powers.get(m, 0) for m in markers) > 1:
            raise TextFormatError(f"products of Clifford monomials in {text!r}")
    scalar = expr.subs({m: 0 for m in markers})
    terms = {0: _to_poly(scalar, text)}
    for marker in markers:
        coeff = expr.coeff(marker)
        mask = int(marker.name[2:])
        terms[mask] = terms.get(mask, RING.zero) + _to_poly(coeff, text)
    return CliffElem(terms)


def render_denominator(f: RatXi) -> str:
    if f.restricted:
        tokens = [f"(xn-i)^{f.minus}" if f.minus else "", f"(xn+i)^{f.plus}" if f.plus else ""]
        tokens = [t for t in tokens if t]
        return "*".join(tokens) if tokens else "1"
    return f"Q^{f.q}"


def render_ratxi(f: RatXi) -> str:
    return "{" + render_cliff(f.numerator) + "} / {" + render_denominator(f) + "}"


def parse_ratxi(text: str) -> RatXi:
    match = _RATXI_FORM.match(text)
    if not match:
        raise TextFormatError(f"expected '{{numerator}} / {{denominator}}': {text!r}")
    numerator = parse_cliff(match.group(1))
    denominator = match.group(2).replace(" ", "")
    exponents = {"Q": 0, "(xn-i)": 0, "(xn+i)": 0}
    restricted = denominator != "Q^0"
    if denominator not in ("1", "Q^0"):
        for token in denominator.split("*"):
            found = _DENOMINATOR_TOKEN.match(token)
            if not found:
                raise TextFormatError(f"unknown denominator factor {token!r}")
            exponents[found.group(1)] += int(found.group(2))
        restricted = exponents["Q"] == 0
    return RatXi(
        numerator,
        q=exponents["Q"],
        minus=exponents["(xn-i)"],
        plus=exponents["(xn+i)"],
        restricted=restricted,
    )


def parse_expression(text: str) -> Union[Poly, CliffElem, RatXi]:
    """Parses any of the three expression kinds, choosing by syntax."""
    if _RATXI_FORM.match(text):
        return parse_ratxi(text)
    if _CLIFFORD_TOKEN.search(text):
        return parse_cliff(text)
    return parse_poly(text)


def render_expression(value: Union[Poly, CliffElem, RatXi]) -> str:
    if isinstance(value, RatXi):
        return render_ratxi(value)
    if isinstance(value, CliffElem):
        return render_cliff(value)
    return render_poly(value)


_LATEX_NAMES = {
    _SYMBOLS["x1"]: r"\xi_{1}",
    _SYMBOLS["x2"]: r"\xi_{2}",
    _SYMBOLS["x3"]: r"\xi_{3}",
    _SYMBOLS["x4"]: r"\xi_{4}",
    _SYMBOLS["xn"]: r"\xi_{n}",
    _SYMBOLS["h1"]: r"h'(0)",
    _SYMBOLS["h2"]: r"h''(0)",
    _SYMBOLS["sB"]: r"s_{\partial M}",
    _SYMBOLS["sM"]: r"s_{M}",
    _SYMBOLS["K"]: r"K",
}
_LATEX_NAMES.update(
    {
        _SYMBOLS[curvature_name(idx)]: "R_{" + "".join(str(i) for i in idx) + "}"
        for idx in CURVATURE_INDICES
    }
)


def latex_poly(p: Poly) -> str:
    return latex(p.as_expr(), symbol_names=_LATEX_NAMES)


def latex_ratxi(f: RatXi) -> str:
    terms = []
    for mask, coeff in f.numerator:
        mono = "".join(f"e_{{{k}}}" for k in mask_indices(mask))
        terms.append(rf"\left({latex_poly(coeff)}\right){mono}")
    numerator = " + ".join(terms) if terms else "0"
    if f.restricted:
        factors = []
        if f.minus:
            factors.append(rf"(\xi_{{n}}-i)^{{{f.minus}}}")
        if f.plus:
            factors.append(rf"(\xi_{{n}}+i)^{{{f.plus}}}")
        denominator = "".join(factors)
    else:
        denominator = rf"|\xi|^{{{2 * f.q}}}" if f.q else ""
    if not denominator:
        return numerator
    return rf"\frac{{{numerator}}}{{{denominator}}}"
