"""Named intermediates for the ``show`` command."""

import logging
from typing import Callable, Dict, List, Optional

from boundary_residue.cases import case_by_number, enumerate_cases
from boundary_residue.config import DEFAULT_REPORT_CONFIG, ReportConfig
from boundary_residue.errors import PipelineInvariantError
from boundary_residue.jets import key_label, keys_up_to
from boundary_residue.lemmas import LemmaCheck, verify_lemma_tables, verify_pi_plus_table
from boundary_residue.models import Intermediate, ShownEntry
from boundary_residue.oracle import NumericOracle
from boundary_residue.pipeline import ResiduePipeline
from boundary_residue.theorem import assemble_theorem, boundary_relations
from symbolic.clifford import CliffElem
from symbolic.ratxi import RatXi
from symbolic.scalars import Poly, const
from symbolic.sphere import moment_conventions
from symbolic.text import (
    latex_poly,
    latex_ratxi,
    parse_expression,
    render_expression,
    render_gauss,
    render_poly,
    render_ratxi,
)

logger = logging.getLogger(__name__)

SYMBOL_TARGETS = {"q-1": "sigma-1", "q-2": "sigma-2", "q-3": "sigma-3"}
CASE_TARGETS = {f"case-{spec.number}": spec.number for spec in enumerate_cases()}
NAMED_TARGETS = (
    "pi-plus-table",
    "lemmas",
    "sum",
    "theorem",
    "identities",
    "moments",
    "relations",
    "expr",
)
SHOW_TARGETS = tuple(SYMBOL_TARGETS) + tuple(CASE_TARGETS) + NAMED_TARGETS


def _poly_entry(label: str, p: Poly) -> ShownEntry:
    return ShownEntry(label=label, text=render_poly(p), latex=latex_poly(p))


def _ratxi_entry(label: str, f: RatXi) -> ShownEntry:
    return ShownEntry(label=label, text=render_ratxi(f), latex=latex_ratxi(f))


def _check_entries(checks: List[LemmaCheck], with_values: bool = False) -> List[ShownEntry]:
    entries = []
    for check in checks:
        status = check.status if check.verdict is None else f"{check.status} ({check.verdict})"
        entries.append(ShownEntry(label=check.name, text=status))
        if with_values:
            entries.append(_ratxi_entry(f"{check.name} computed", check.computed))
        for label, value in check.diff.items():
            entries.append(_ratxi_entry(f"{check.name} diff {label}", value))
    return entries


class IntermediateBuilder:
    """Computes exactly the stages one ``show`` target needs."""

    def __init__(
        self,
        pipeline: ResiduePipeline,
        oracle: Optional[NumericOracle] = None,
        config: ReportConfig = DEFAULT_REPORT_CONFIG,
    ):
        self.pipeline = pipeline
        self.oracle = oracle
        self.config = config

    def _ordered_symbols(self):
        return [self.pipeline.symbols[name] for name in ("sigma-1", "sigma-2", "sigma-3")]

    def _arbitrated(self, checks: List[LemmaCheck]) -> List[LemmaCheck]:
        if self.oracle is not None:
            for check in checks:
                if check.diff:
                    check.verdict = self.oracle.arbitrate_lemma(check)
        return checks

    def _reconciled_cases(self, numbers: Optional[List[int]] = None):
        if self.pipeline.published is None and not self.pipeline.load_published_values():
            raise PipelineInvariantError("published values could not be loaded")
        specs = [case_by_number(n) for n in numbers] if numbers else None
        return self.pipeline.reconcile(self.pipeline.evaluate_cases(specs), self.oracle)

    def symbol(self, target: str) -> List[ShownEntry]:
        name = SYMBOL_TARGETS[target]
        jet = self.pipeline.symbols[name]
        entries = [_ratxi_entry(key_label(key), jet[key]) for key in keys_up_to(jet.order)]
        checks = [c for c in verify_lemma_tables(self._ordered_symbols()) if c.symbol == name]
        return entries + _check_entries(self._arbitrated(checks))

    def case(self, target: str) -> List[ShownEntry]:
        result = self._reconciled_cases([CASE_TARGETS[target]])[0]
        entries = [
            ShownEntry(label="spec", text=result.spec.label),
            ShownEntry(
                label="coefficient",
                text=render_gauss(result.spec.coefficient),
                latex=latex_poly(const(result.spec.coefficient)),
            ),
            _poly_entry("density [pi*Omega3]", result.density),
        ]
        if result.volume_part:
            entries.append(_poly_entry("grade-5 part", result.volume_part))
        if result.published_value is not None:
            entries.append(_poly_entry(f"published [{result.published_unit}]", result.published_value))
        entries.append(ShownEntry(label="status", text=result.status or "unpublished"))
        if result.diff is not None:
            entries.append(_poly_entry("difference [pi*Omega3]", result.diff))
        if result.verdict:
            entries.append(ShownEntry(label="oracle", text=result.verdict))
        return entries

    def pi_plus_table(self) -> List[ShownEntry]:
        return _check_entries(self._arbitrated(verify_pi_plus_table(self._ordered_symbols())), True)

    def lemmas(self) -> List[ShownEntry]:
        return _check_entries(self._arbitrated(verify_lemma_tables(self._ordered_symbols())))

    def density_sum(self) -> List[ShownEntry]:
        total = self.pipeline.sum_boundary_density(self._reconciled_cases())
        return [
            _poly_entry("engine", total.engine),
            _poly_entry("published", total.published),
            _poly_entry("published cases, Case 3 in pi^3", total.published_cases_pi3),
            _poly_entry("published cases, Case 3 in pi*Omega3", total.published_cases_literal),
            ShownEntry(label="Case 3 reading (engine)", text=total.engine_case_three_reading or "neither"),
            ShownEntry(label="Case 3 reading (published sum)", text=total.published_sum_reading or "neither"),
            ShownEntry(label="status", text=total.status),
        ]

    def theorem(self) -> List[ShownEntry]:
        total = self.pipeline.sum_boundary_density(self._reconciled_cases())
        entries = []
        for theorem in (assemble_theorem(total.engine, "engine"), assemble_theorem(total.published, "published")):
            entries.append(_poly_entry(f"{theorem.source} [pi^3/16]", theorem.as_poly()))
            entries.append(_poly_entry(f"{theorem.source} intermediate [pi*Omega3/16]", theorem.intermediate))
        published = self.pipeline.published_theorem()
        entries.append(
            ShownEntry(
                label="published theorem [pi^3/16]",
                text=", ".join(f"{k} {render_gauss(v)}" for k, v in published.items()),
            )
        )
        return entries

    def identities(self) -> List[ShownEntry]:
        entries = []
        for pair in self.pipeline.check_adjoint_pairs(self._reconciled_cases()):
            subject = f"cases {pair.case}/{pair.partner}"
            entries.append(_poly_entry(f"{subject} extra integral", pair.extra))
            entries.append(_poly_entry(f"{subject} difference", pair.difference))
            entries.append(ShownEntry(label=f"{subject} identity holds", text=str(pair.holds)))
        return entries

    def moments(self) -> List[ShownEntry]:
        return [
            ShownEntry(
                label=f"{convention} {key} [pi^2]",
                text=render_gauss(value),
                latex=latex_poly(const(value)),
            )
            for convention, values in moment_conventions().items()
            for key, value in values.items()
        ]

    def relations(self) -> List[ShownEntry]:
        relations = boundary_relations()
        return [
            _poly_entry("sM", relations.scalar_curvature),
            _poly_entry("K", relations.extrinsic_curvature),
            _poly_entry("2K", relations.boundary_term),
        ]

    def expression(self, text: Optional[str]) -> List[ShownEntry]:
        if not text:
            raise PipelineInvariantError("show expr needs an expression")
        value = parse_expression(text)
        if isinstance(value, RatXi):
            latex = latex_ratxi(value)
        elif isinstance(value, CliffElem):
            latex = latex_ratxi(RatXi.of(value))
        else:
            latex = latex_poly(value)
        return [ShownEntry(label="expression", text=render_expression(value), latex=latex)]

    def build(self, target: str, expression: Optional[str] = None) -> Intermediate:
        """
        Computes one named intermediate.

        Args:
            target (str): One of SHOW_TARGETS.
            expression (str, optional): The text for the ``expr`` target.

        Returns:
            Intermediate: Labelled entries in text and LaTeX form.
        """
        named: Dict[str, Callable[[], List[ShownEntry]]] = {
            "pi-plus-table": self.pi_plus_table,
            "lemmas": self.lemmas,
            "sum": self.density_sum,
            "theorem": self.theorem,
            "identities": self.identities,
            "moments": self.moments,
            "relations": self.relations,
            "expr": lambda: self.expression(expression),
        }
        if target in SYMBOL_TARGETS:
            entries = self.symbol(target)
        elif target in CASE_TARGETS:
            entries = self.case(target)
        elif target in named:
            entries = named[target]()
        else:
            raise PipelineInvariantError(f"unknown show target: {target}")
        logger.info(f"Built {len(entries)} entries for {target}")
        return Intermediate(schema_tag=self.config.schema, target=target, entries=entries)
