"""Report assembly, deviation log and the JSON, LaTeX and text emitters."""

import io
import logging
import re
from typing import Dict, List, Optional

import orjson
from jinja2 import Environment, FileSystemLoader, StrictUndefined
from rich.console import Console
from rich.table import Table
from rich.text import Text

from boundary_residue.config import DEFAULT_REPORT_CONFIG, ReportConfig, resolve_path
from boundary_residue.jets import key_label
from boundary_residue.lemmas import LemmaCheck
from boundary_residue.models import (
    PI_CUBED,
    CaseRecord,
    Coefficient,
    Density,
    Deviation,
    IdentityRecord,
    Intermediate,
    LemmaRecord,
    RelationsRecord,
    Report,
    ResidualRecord,
    SumRecord,
    TheoremRecord,
    decode_coefficient,
    encode_coefficient,
)
from boundary_residue.oracle import ENGINE_CONFIRMED
from boundary_residue.pipeline import MATCH, MISMATCH, VANISHES, PipelineRun
from boundary_residue.theorem import TheoremOutput
from symbolic.scalars import const
from symbolic.text import latex_poly, render_gauss, render_poly, render_ratxi

logger = logging.getLogger(__name__)

CLEAN_STATUSES = (MATCH, VANISHES)


def _case_records(run: PipelineRun) -> List[CaseRecord]:
    records = []
    for r in run.results:
        records.append(
            CaseRecord(
                case=r.spec.number,
                value=Density.from_poly(r.density),
                status=r.status or MISMATCH,
                spec=r.spec.label,
                published_value=Density.from_poly(r.published_value) if r.published_value is not None else None,
                published_unit=r.published_unit if r.published_value is not None else None,
                diff=Density.from_poly(r.diff) if r.diff is not None else None,
                oracle_verdict=r.verdict,
                grade5_residue=render_poly(r.volume_part) if r.volume_part else None,
            )
        )
    return records


def _theorem_record(theorem: TheoremOutput, published: Optional[Dict]) -> TheoremRecord:
    coefficients = theorem.coefficients()
    status = MATCH if published is None or coefficients == published else MISMATCH
    return TheoremRecord(
        source=theorem.source,
        K2=encode_coefficient(coefficients["K2"]),
        sM=encode_coefficient(coefficients["sM"]),
        sB=encode_coefficient(coefficients["sB"]),
        intermediate=Density.from_poly(theorem.intermediate),
        status=status,
    )


def _lemma_record(check: LemmaCheck, table: str) -> LemmaRecord:
    return LemmaRecord(
        name=check.name,
        table=table,
        description=check.description,
        status=check.status,
        diff={label: render_ratxi(value) for label, value in check.diff.items()},
        oracle_verdict=check.verdict,
    )


def _published_theorem(run: PipelineRun) -> Optional[Dict]:
    if run.published is None:
        return None
    theorem = run.published.theorem
    return {k: decode_coefficient(getattr(theorem, k)) for k in ("K2", "sM", "sB")}


def _stated_theorem_record(run: PipelineRun) -> Optional[TheoremRecord]:
    """The theorem exactly as published, next to the ones assembled from sums."""
    if run.published is None:
        return None
    theorem = run.published.theorem
    return TheoremRecord(
        source="published theorem",
        K2=theorem.K2,
        sM=theorem.sM,
        sB=theorem.sB,
        intermediate=run.published.intermediate,
        status=MATCH,
    )


def collect_deviations(run: PipelineRun) -> List[Deviation]:
    """
    Lists every place where the engine and the published values part ways.

    A deviation is documented when it is one of the known internal
    inconsistencies of the published values or an engine value confirmed
    by the numeric oracle.
    """
    deviations: List[Deviation] = []
    total = run.total

    if total.published_cases_pi3 != total.published_cases_literal:
        deviations.append(
            Deviation(
                kind="unit-conflict",
                subject="case 3",
                detail=(
                    f"published cases sum to {render_poly(total.published_cases_pi3)} with Case 3 "
                    f"in pi^3 and to {render_poly(total.published_cases_literal)} with Case 3 in "
                    f"pi*Omega3; the published sum follows {total.published_sum_reading or 'neither'}, "
                    f"the engine supports {total.engine_case_three_reading or 'neither'}"
                ),
                documented=True,
            )
        )

    published_theorem = _published_theorem(run)
    from_published_sum = next((t for t in run.theorems if t.source == "published"), None)
    if published_theorem and from_published_sum:
        derived = from_published_sum.coefficients()
        for key, value in published_theorem.items():
            if derived[key] != value:
                deviations.append(
                    Deviation(
                        kind="theorem-coefficient",
                        subject=key,
                        detail=(
                            f"published sum gives {render_gauss(derived[key])} by substitution, "
                            f"published theorem states {render_gauss(value)}"
                        ),
                        documented=True,
                    )
                )

    for key, exact in run.moments.get("gamma", {}).items():
        shorthand = run.moments.get("shorthand", {}).get(key)
        if shorthand is not None and shorthand != exact:
            deviations.append(
                Deviation(
                    kind="moment-constant",
                    subject=key,
                    detail=f"Gamma formula gives {render_gauss(exact)} pi^2, shorthand {render_gauss(shorthand)} pi^2",
                    documented=True,
                )
            )

    case_documented = True
    for r in run.results:
        if r.volume_part:
            deviations.append(
                Deviation(
                    kind="grade-5-trace",
                    subject=f"case {r.spec.number}",
                    detail=f"e1e2e3e4e5 part {render_poly(r.volume_part)} discarded by the trace",
                    documented=True,
                )
            )
        if r.status == MISMATCH:
            documented = r.verdict == ENGINE_CONFIRMED
            case_documented = case_documented and documented
            deviations.append(
                Deviation(
                    kind="case-value",
                    subject=f"case {r.spec.number}",
                    detail=f"engine minus published: {render_poly(r.diff)}; oracle: {r.verdict or 'not run'}",
                    documented=documented,
                )
            )

    if total.status == MISMATCH:
        deviations.append(
            Deviation(
                kind="sum",
                subject="boundary density",
                detail=f"engine {render_poly(total.engine)}, published {render_poly(total.published)}",
                documented=case_documented,
            )
        )
    engine_theorem = next((t for t in run.theorems if t.source == "engine"), None)
    if engine_theorem and published_theorem and engine_theorem.coefficients() != published_theorem:
        deviations.append(
            Deviation(
                kind="theorem",
                subject="engine theorem",
                detail=f"engine {render_poly(engine_theorem.as_poly())} [pi^3/16]",
                documented=case_documented,
            )
        )

    for check in run.lemmas + run.projections:
        if check.status == MISMATCH:
            deviations.append(
                Deviation(
                    kind="lemma-table",
                    subject=check.name,
                    detail=f"differs in {', '.join(check.diff)}; oracle: {check.verdict or 'not run'}",
                    documented=check.verdict == ENGINE_CONFIRMED,
                )
            )

    for pair in run.pairs:
        if not pair.holds:
            deviations.append(
                Deviation(
                    kind="adjoint-identity",
                    subject=f"cases {pair.case} and {pair.partner}",
                    detail="case difference is not the extra integral",
                    documented=False,
                )
            )
        elif not pair.values_equal:
            deviations.append(
                Deviation(
                    kind="adjoint-pair",
                    subject=f"cases {pair.case} and {pair.partner}",
                    detail=f"extra integral {render_poly(pair.extra)} does not vanish",
                    documented=False,
                )
            )

    if run.inverse_residual:
        deviations.append(
            Deviation(
                kind="inverse-identity",
                subject="q-1 first order",
                detail=", ".join(key_label(k) for k in run.inverse_residual),
                documented=False,
            )
        )
    if run.second_order_residual:
        deviations.append(
            Deviation(
                kind="metric-jet",
                subject="q-1 second order",
                detail=", ".join(key_label(k) for k in run.second_order_residual),
                documented=True,
            )
        )
    for order, entries in run.composition.items():
        # the metric tables agree with each other only to first order
        second_order = [k for k in entries if len(k) >= 2]
        first_order = [k for k in entries if len(k) < 2]
        if second_order:
            deviations.append(
                Deviation(
                    kind="metric-jet",
                    subject=f"composition {order}",
                    detail=", ".join(key_label(k) for k in second_order),
                    documented=True,
                )
            )
        if first_order:
            deviations.append(
                Deviation(
                    kind="composition",
                    subject=order,
                    detail=", ".join(key_label(k) for k in first_order),
                    documented=False,
                )
            )

    for d in deviations:
        logger.warning(f"Deviation [{d.kind}] {d.subject}: {d.detail}")
    return deviations


def build_report(run: PipelineRun, config: ReportConfig = DEFAULT_REPORT_CONFIG) -> Report:
    """
    Collects a pipeline run into the serializable report.

    Args:
        run (PipelineRun): Output of ResiduePipeline.run.
        config (ReportConfig): Schema tag and rendering settings.

    Returns:
        Report: The complete report.
    """
    total = run.total
    published_theorem = _published_theorem(run)
    moments: Dict[str, Dict[str, Coefficient]] = {
        convention: {k: encode_coefficient(v) for k, v in values.items()}
        for convention, values in run.moments.items()
    }
    residuals = [
        ResidualRecord(check="inverse first order", entries=[key_label(k) for k in run.inverse_residual]),
        ResidualRecord(check="inverse second order", entries=[key_label(k) for k in run.second_order_residual]),
    ]
    residuals += [
        ResidualRecord(check=f"composition {order}", entries=[key_label(k) for k in entries])
        for order, entries in run.composition.items()
    ]
    theorems = [_theorem_record(t, published_theorem) for t in run.theorems]
    stated = _stated_theorem_record(run)
    if stated is not None:
        theorems.append(stated)
    return Report(
        schema_tag=config.schema,
        cases=_case_records(run),
        sum=SumRecord(
            engine=Density.from_poly(total.engine),
            published=Density.from_poly(total.published),
            published_cases_pi3=Density.from_poly(total.published_cases_pi3),
            published_cases_literal=Density.from_poly(total.published_cases_literal),
            engine_case_three_reading=total.engine_case_three_reading,
            published_sum_reading=total.published_sum_reading,
            status=total.status,
        ),
        theorems=theorems,
        relations=RelationsRecord(
            scalar_curvature=render_poly(run.relations.scalar_curvature),
            extrinsic_curvature=render_poly(run.relations.extrinsic_curvature),
            boundary_term=render_poly(run.relations.boundary_term),
        ),
        lemmas=[_lemma_record(c, "symbol") for c in run.lemmas]
        + [_lemma_record(c, "projection") for c in run.projections],
        identities=[
            IdentityRecord(
                pair=(p.case, p.partner),
                extra_integral=Density.from_poly(p.extra),
                difference=Density.from_poly(p.difference),
                sign=p.sign,
                holds=p.holds,
                values_equal=p.values_equal,
            )
            for p in run.pairs
        ],
        residuals=residuals,
        moments=moments,
        deviations=collect_deviations(run),
    )


def exit_code(report: Report) -> int:
    """0 when everything matches, 2 when only documented deviations remain, 1 otherwise."""
    clean = all(c.status in CLEAN_STATUSES for c in report.cases)
    if clean and not report.deviations:
        return 0
    if all(d.documented for d in report.deviations):
        return 2
    return 1


def emit_json(report: Report) -> bytes:
    """Model field order, two-space indent, trailing newline."""
    return orjson.dumps(
        report.model_dump(mode="json", by_alias=True),
        option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE,
    )


def parse_json(data: bytes) -> Report:
    return Report.model_validate(orjson.loads(data))


def density_text(d: Density) -> str:
    return render_poly(d.to_poly())


def coefficient_text(c: Coefficient) -> str:
    return render_gauss(decode_coefficient(c))


def density_latex(d: Density) -> str:
    return latex_poly(d.to_poly())


def coefficient_latex(c: Coefficient) -> str:
    return latex_poly(const(decode_coefficient(c)))


_TEX_SPECIALS = {
    "\\": r"\textbackslash{}",
    "{": r"\{",
    "}": r"\}",
    "_": r"\_",
    "^": r"\^{}",
    "&": r"\&",
    "%": r"\%",
    "#": r"\#",
    "$": r"\$",
    "~": r"\textasciitilde{}",
}
_TEX_SPECIAL = re.compile("|".join(re.escape(c) for c in _TEX_SPECIALS))


def tex_escape(text: str) -> str:
    return _TEX_SPECIAL.sub(lambda m: _TEX_SPECIALS[m.group(0)], text)


def _environment(config: ReportConfig) -> Environment:
    env = Environment(
        loader=FileSystemLoader(str(resolve_path(config.template_dir))),
        block_start_string="((*",
        block_end_string="*))",
        variable_start_string="(((",
        variable_end_string=")))",
        comment_start_string="((=",
        comment_end_string="=))",
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
        autoescape=False,
        undefined=StrictUndefined,
    )
    env.filters["density"] = density_latex
    env.filters["coefficient"] = coefficient_latex
    env.filters["tex"] = tex_escape
    return env


def emit_latex(report: Report, config: ReportConfig = DEFAULT_REPORT_CONFIG) -> bytes:
    """Renders a standalone LaTeX document from the report."""
    template = _environment(config).get_template(config.template_name)
    return template.render(report=report, pi_cubed=PI_CUBED).encode("utf-8")


def _console(config: ReportConfig) -> Console:
    return Console(
        file=io.StringIO(),
        width=config.console_width,
        color_system=None,
        force_terminal=False,
        highlight=False,
        emoji=False,
    )


def _table(title: str, *columns: str) -> Table:
    table = Table(title=Text(title), title_justify="left")
    for column in columns:
        table.add_column(Text(column))
    return table


def _add_row(table: Table, *cells: str) -> None:
    table.add_row(*(Text(cell) for cell in cells))


def emit_text(report: Report, config: ReportConfig = DEFAULT_REPORT_CONFIG) -> bytes:
    """Fixed-width tables without color."""
    console = _console(config)

    cases = _table("Cases", "case", "(r,l,k,j,|a|)", "engine", "unit", "published", "status", "oracle")
    for c in report.cases:
        published = f"{density_text(c.published_value)} [{c.published_unit}]" if c.published_value else "-"
        _add_row(
            cases, str(c.case), c.spec, density_text(c.value), c.unit, published, c.status, c.oracle_verdict or "-"
        )
    console.print(cases)

    s = report.sum
    sums = _table("Sum", "quantity", "density [pi*Omega3]")
    _add_row(sums, "engine", density_text(s.engine))
    _add_row(sums, "published sum", density_text(s.published))
    _add_row(sums, "published cases, Case 3 in pi^3", density_text(s.published_cases_pi3))
    _add_row(sums, "published cases, Case 3 in pi*Omega3", density_text(s.published_cases_literal))
    _add_row(sums, "Case 3 reading supported by the engine", s.engine_case_three_reading or "neither")
    _add_row(sums, "Case 3 reading of the published sum", s.published_sum_reading or "neither")
    console.print(sums)

    theorems = _table("Theorem [pi^3/16]", "source", "K^2", "sM", "sB", "status")
    for t in report.theorems:
        _add_row(theorems, t.source, coefficient_text(t.K2), coefficient_text(t.sM), coefficient_text(t.sB), t.status)
    console.print(theorems)

    relations = _table("Boundary relations", "quantity", "value")
    _add_row(relations, "sM", report.relations.scalar_curvature)
    _add_row(relations, "K", report.relations.extrinsic_curvature)
    _add_row(relations, "2K", report.relations.boundary_term)
    console.print(relations)

    if report.lemmas:
        lemmas = _table("Published tables", "table", "entry", "status", "differs in", "oracle")
        for row in report.lemmas:
            _add_row(lemmas, row.table, row.name, row.status, ", ".join(row.diff) or "-", row.oracle_verdict or "-")
        console.print(lemmas)

    if report.identities:
        identities = _table("Adjoint pairs", "pair", "extra integral", "identity", "equal")
        for i in report.identities:
            _add_row(
                identities,
                f"{i.pair[0]} / {i.pair[1]}", density_text(i.extra_integral), str(i.holds), str(i.values_equal)
            )
        console.print(identities)

    deviations = _table("Deviations", "kind", "subject", "documented", "detail")
    for d in report.deviations:
        _add_row(deviations, d.kind, d.subject, "yes" if d.documented else "no", d.detail)
    console.print(deviations)
    return console.file.getvalue().encode("utf-8")


def emit(report: Report, fmt: str, config: ReportConfig = DEFAULT_REPORT_CONFIG) -> bytes:
    if fmt == "json":
        return emit_json(report)
    if fmt == "latex":
        return emit_latex(report, config)
    return emit_text(report, config)


def write_report(data: bytes, file_path: str) -> bool:
    """
    Writes rendered report bytes to a file.

    Returns:
        bool: True if the file was written, False otherwise.
    """
    try:
        with open(file_path, "wb") as file:
            file.write(data)
        logger.info(f"Wrote report to {file_path}")
        return True
    except OSError as e:
        logger.error(f"Failed to write report to {file_path}: {e}")
        return False


def emit_intermediate(item: Intermediate, fmt: str, config: ReportConfig = DEFAULT_REPORT_CONFIG) -> bytes:
    """Renders one ``show`` target in the requested format."""
    if fmt == "json":
        return orjson.dumps(
            item.model_dump(mode="json", by_alias=True),
            option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE,
        )
    if fmt == "latex":
        template = _environment(config).get_template(config.show_template_name)
        return template.render(item=item).encode("utf-8")
    console = _console(config)
    table = _table(item.target, "entry", "value")
    for entry in item.entries:
        _add_row(table, entry.label, entry.text)
    console.print(table)
    return console.file.getvalue().encode("utf-8")
