import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import orjson
from pydantic import ValidationError

from boundary_residue.cases import (
    CaseResult,
    CaseSpec,
    case_by_number,
    enumerate_cases,
    evaluate_case,
    to_density,
    trace_integral,
)
from boundary_residue.config import DEFAULT_CONFIG, PipelineConfig, resolve_path
from boundary_residue.errors import PipelineInvariantError
from boundary_residue.jets import (
    JetSymbol,
    Key,
    MetricJet,
    build_metric_jet,
    composition_residual,
    derive_inverse_symbols,
    inverse_identity_residual,
    second_order_inverse_residual,
    jet_derivative,
)
from boundary_residue.lemmas import LemmaCheck, symbol_table, verify_lemma_tables, verify_pi_plus_table
from boundary_residue.models import PI_CUBED, PI_OMEGA3, PublishedValues, decode_coefficient
from boundary_residue.oracle import NumericOracle
from boundary_residue.theorem import Relations, TheoremOutput, assemble_theorem, boundary_relations
from symbolic.ratxi import RatXi, dxi, restrict_to_unit_sphere
from symbolic.scalars import ZERO, Poly, gauss
from symbolic.sphere import moment_conventions
from symbolic.text import parse_poly, render_poly

logger = logging.getLogger(__name__)

MATCH = "match"
MISMATCH = "mismatch"
VANISHES = "vanishes"

# (case, partner, sign, left factor, right factor); a factor is
# (symbol, normal x-derivatives, xi_n derivatives). case - partner = sign *
# coefficient(case) * int tr[left right].
ADJOINT_PAIRS: Tuple[Tuple[int, int, int, Tuple[str, int, int], Tuple[str, int, int]], ...] = (
    (6, 2, -1, ("sigma-1", 0, 3), ("sigma-1", 2, 0)),
    (10, 9, 1, ("sigma-2", 1, 0), ("sigma-1", 0, 2)),
    (12, 7, -1, ("sigma-2", 0, 0), ("sigma-1", 1, 2)),
    (15, 14, 1, ("sigma-3", 0, 0), ("sigma-1", 0, 1)),
)


@dataclass
class SumOutput:
    """The engine's summed density and the published sums under both Case 3 readings."""

    engine: Poly
    published: Poly
    published_cases_pi3: Poly
    published_cases_literal: Poly
    engine_case_three_reading: Optional[str] = None
    published_sum_reading: Optional[str] = None

    @property
    def status(self) -> str:
        return MATCH if self.engine == self.published else MISMATCH


@dataclass
class AdjointPair:
    case: int
    partner: int
    sign: int
    extra: Poly
    difference: Poly

    @property
    def holds(self) -> bool:
        return self.difference == self.extra * gauss(self.sign)

    @property
    def values_equal(self) -> bool:
        return not self.difference


@dataclass
class PipelineRun:
    """Everything one full run produces, in case order."""

    results: List[CaseResult]
    total: SumOutput
    theorems: List[TheoremOutput]
    relations: Relations
    lemmas: List[LemmaCheck] = field(default_factory=list)
    projections: List[LemmaCheck] = field(default_factory=list)
    pairs: List[AdjointPair] = field(default_factory=list)
    inverse_residual: Dict[Key, RatXi] = field(default_factory=dict)
    second_order_residual: Dict[Key, RatXi] = field(default_factory=dict)
    composition: Dict[str, Dict[Key, RatXi]] = field(default_factory=dict)
    moments: Dict[str, Dict] = field(default_factory=dict)
    published: Optional[PublishedValues] = None


@lru_cache(maxsize=1)
def _process_symbols() -> Dict[str, JetSymbol]:
    return symbol_table(derive_inverse_symbols(build_metric_jet()))


def _evaluate_in_worker(number: int) -> Tuple[int, str, str, float]:
    """Worker entry point; returns text so no ring elements cross processes."""
    result = evaluate_case(case_by_number(number), _process_symbols())
    return number, render_poly(result.density), render_poly(result.volume_part), result.elapsed


def to_pi_omega3(value: Poly, unit: str) -> Poly:
    if unit == PI_OMEGA3:
        return value
    if unit == PI_CUBED:
        return value * gauss("1/2")
    raise PipelineInvariantError(f"unknown density unit: {unit}")


class ResiduePipeline:
    """Runs the boundary-residue computation and compares it with the published values."""

    def __init__(self, config: PipelineConfig = DEFAULT_CONFIG):
        self.config = config
        self.metric: Optional[MetricJet] = None
        self._symbols: Optional[Dict[str, JetSymbol]] = None
        self.published: Optional[PublishedValues] = None

    @property
    def symbols(self) -> Dict[str, JetSymbol]:
        if self._symbols is None:
            self.build_symbols()
        return self._symbols

    def build_symbols(self) -> Dict[str, JetSymbol]:
        """
        Builds the metric jets and derives q-1, q-2 and q-3.

        Returns:
            Dict[str, JetSymbol]: The three symbols by name.
        """
        if self._symbols is None:
            self.metric = build_metric_jet()
            self._symbols = symbol_table(derive_inverse_symbols(self.metric))
        return self._symbols

    def load_published_values(self, file_path: Optional[str] = None) -> bool:
        """
        Loads the published per-case values, sum and theorem.

        Args:
            file_path (str, optional): Path to the JSON fixtures. Defaults to
                config.published_values_path.

        Returns:
            bool: True if the fixtures were loaded, False otherwise.
        """
        file_path = file_path or self.config.published_values_path
        try:
            payload = orjson.loads(resolve_path(file_path).read_bytes())
            self.published = PublishedValues.model_validate(payload)
            logger.info(f"Loaded {len(self.published.cases)} published case values from {file_path}")
            return True
        except (OSError, orjson.JSONDecodeError, ValidationError) as e:
            logger.error(f"Failed to load published values from {file_path}: {e}")
            return False

    def evaluate_cases(self, specs: Optional[List[CaseSpec]] = None) -> List[CaseResult]:
        """
        Evaluates the cases, in worker processes when config.jobs > 1.

        Args:
            specs (List[CaseSpec], optional): Cases to evaluate. Defaults to all fifteen.

        Returns:
            List[CaseResult]: Results sorted by case number.
        """
        specs = sorted(specs or enumerate_cases())
        if self.config.jobs <= 1 or len(specs) <= 1:
            results = [evaluate_case(spec, self.symbols) for spec in specs]
        else:
            logger.info(f"Evaluating {len(specs)} cases with {self.config.jobs} workers")
            with ProcessPoolExecutor(max_workers=self.config.jobs) as pool:
                rows = list(pool.map(_evaluate_in_worker, [s.number for s in specs]))
            results = [
                CaseResult(
                    spec=case_by_number(number),
                    density=parse_poly(density),
                    volume_part=parse_poly(volume),
                    elapsed=elapsed,
                )
                for number, density, volume, elapsed in rows
            ]
        return sorted(results, key=lambda r: r.spec.number)

    def published_case_value(self, number: int) -> Tuple[Optional[Poly], str]:
        """The published value of one case, as stored, and its unit."""
        if self.published is None:
            return None, PI_OMEGA3
        case = self.published.case(number)
        if case is None:
            return None, PI_OMEGA3
        return case.value.to_poly(), case.unit

    def _published_in_pi_omega3(self, number: int) -> Optional[Poly]:
        value, unit = self.published_case_value(number)
        if value is None:
            return None
        if number == 3:
            unit = self.config.case_three_unit
        return to_pi_omega3(value, unit)

    def sum_boundary_density(self, results: List[CaseResult]) -> SumOutput:
        """
        Sums the case densities and the published values under both Case 3 readings.

        Args:
            results (List[CaseResult]): All fifteen evaluated cases.

        Returns:
            SumOutput: Sums in units of pi*Omega3 and the reading each one supports.
        """
        if sorted(r.spec.number for r in results) != [s.number for s in enumerate_cases()]:
            raise PipelineInvariantError("the sum needs all fifteen cases")
        engine = sum((r.density for r in results), ZERO)

        published = self.published.sum.to_poly() if self.published else ZERO
        by_pi3, literal = ZERO, ZERO
        engine_reading = None
        for result in results:
            value, unit = self.published_case_value(result.spec.number)
            if value is None:
                continue
            by_pi3 += to_pi_omega3(value, unit)
            literal += value
            if result.spec.number == 3 and unit != PI_OMEGA3:
                if result.density == value:
                    engine_reading = PI_OMEGA3
                elif result.density == to_pi_omega3(value, unit):
                    engine_reading = unit

        if published == literal:
            sum_reading = PI_OMEGA3
        elif published == by_pi3:
            sum_reading = PI_CUBED
        else:
            sum_reading = None
        logger.info(f"Boundary density sum: {render_poly(engine)} [pi*Omega3]")
        return SumOutput(
            engine=engine,
            published=published,
            published_cases_pi3=by_pi3,
            published_cases_literal=literal,
            engine_case_three_reading=engine_reading,
            published_sum_reading=sum_reading,
        )

    def reconcile(self, results: List[CaseResult], oracle: Optional[NumericOracle] = None) -> List[CaseResult]:
        """
        Sets status, published value and difference on every result.

        Mismatches are arbitrated by ``oracle`` when given.
        """
        for result in results:
            number = result.spec.number
            value, unit = self.published_case_value(number)
            expected = self._published_in_pi_omega3(number)
            result.published_value, result.published_unit = value, unit
            if expected is None:
                result.status = None
                continue
            if not expected and not result.density:
                result.status = VANISHES
            elif expected == result.density:
                result.status = MATCH
            else:
                result.status = MISMATCH
                result.diff = result.density - expected
                logger.warning(
                    f"Case {number} differs from the published value by {render_poly(result.diff)}"
                )
                if oracle is not None:
                    result.verdict = oracle.arbitrate_case(result, expected)
        return results

    def _pair_factor(self, factor: Tuple[str, int, int]) -> RatXi:
        name, normal, xi_n = factor
        f = restrict_to_unit_sphere(jet_derivative(self.symbols[name], normal))
        return dxi(f, "n", xi_n) if xi_n else f

    def check_adjoint_pairs(self, results: List[CaseResult]) -> List[AdjointPair]:
        """
        Computes the extra integral that separates each adjoint-paired case from its partner.

        Returns:
            List[AdjointPair]: One record per pair; ``holds`` is the exact identity.
        """
        by_number = {r.spec.number: r for r in results}
        pairs = []
        for number, partner, sign, left, right in ADJOINT_PAIRS:
            if number not in by_number or partner not in by_number:
                continue
            integral, _ = trace_integral([(self._pair_factor(left), self._pair_factor(right))])
            extra = to_density(case_by_number(number).coefficient, integral)
            pair = AdjointPair(
                case=number,
                partner=partner,
                sign=sign,
                extra=extra,
                difference=by_number[number].density - by_number[partner].density,
            )
            if not pair.holds:
                logger.warning(f"Adjoint identity fails for cases {number} and {partner}")
            elif not pair.values_equal:
                logger.info(
                    f"Cases {number} and {partner} differ by the extra integral {render_poly(extra)}"
                )
            pairs.append(pair)
        return pairs

    def run(self, oracle: Optional[NumericOracle] = None, with_lemmas: bool = True) -> PipelineRun:
        """
        Runs every stage and returns the collected results.

        Args:
            oracle (NumericOracle, optional): Arbitrates mismatches when given.
            with_lemmas (bool): Also compare the published symbol tables.

        Returns:
            PipelineRun: Cases, sums, theorems and consistency checks.
        """
        if self.published is None and not self.load_published_values():
            raise PipelineInvariantError("published values could not be loaded")
        self.build_symbols()
        results = self.reconcile(self.evaluate_cases(), oracle)
        total = self.sum_boundary_density(results)
        theorems = [assemble_theorem(total.engine, "engine"), assemble_theorem(total.published, "published")]

        lemmas, projections = [], []
        if with_lemmas:
            ordered = [self.symbols[n] for n in ("sigma-1", "sigma-2", "sigma-3")]
            lemmas = verify_lemma_tables(ordered)
            projections = verify_pi_plus_table(ordered)
            if oracle is not None:
                for check in lemmas + projections:
                    if check.status == MISMATCH:
                        check.verdict = oracle.arbitrate_lemma(check)

        return PipelineRun(
            results=results,
            total=total,
            theorems=theorems,
            relations=boundary_relations(),
            lemmas=lemmas,
            projections=projections,
            pairs=self.check_adjoint_pairs(results),
            inverse_residual=inverse_identity_residual(self.metric, self.symbols["sigma-1"]),
            second_order_residual=second_order_inverse_residual(self.metric, self.symbols["sigma-1"]),
            composition=composition_residual(self.metric, self.symbols["sigma-1"], self.symbols["sigma-2"]),
            moments=moment_conventions(),
            published=self.published,
        )

    def published_theorem(self) -> Dict[str, object]:
        """The published theorem coefficients as exact numbers."""
        theorem = self.published.theorem
        return {k: decode_coefficient(getattr(theorem, k)) for k in ("K2", "sM", "sB")}
