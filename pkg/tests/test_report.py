from pathlib import Path

import orjson

from boundary_residue.models import Deviation, Intermediate, ShownEntry
from boundary_residue.pipeline import AdjointPair, PipelineRun
from boundary_residue.report import (
    build_report,
    emit_intermediate,
    emit_json,
    emit_latex,
    emit_text,
    exit_code,
    parse_json,
    tex_escape,
    write_report,
)
from symbolic.scalars import SB


def _kinds(report) -> set:
    return {d.kind for d in report.deviations}


def test_json_round_trip(published_run: PipelineRun) -> None:
    report = build_report(published_run)
    data = emit_json(report)
    assert data.endswith(b"\n")
    assert parse_json(data) == report
    assert emit_json(parse_json(data)) == data


def test_case_record_layout(published_run: PipelineRun) -> None:
    payload = orjson.loads(emit_json(build_report(published_run)))
    assert payload["schema"] == "kkw5/1"
    case2 = payload["cases"][1]
    assert list(case2)[:4] == ["case", "value", "unit", "status"]
    assert {k: case2[k] for k in ("case", "value", "unit", "status")} == {
        "case": 2,
        "value": {"h1sq": [29, 64], "h2": [-3, 8], "sB": [0, 1]},
        "unit": "pi*Omega3",
        "status": "match",
    }
    assert payload["sum"]["published"]["sB"] == {"re": [71, 96], "im": [3, 32]}


def test_empty_deviation_list_serializes(published_run: PipelineRun) -> None:
    report = build_report(published_run).model_copy(update={"deviations": []})
    assert b'"deviations": []' in emit_json(report)


def test_documented_deviations(published_run: PipelineRun) -> None:
    report = build_report(published_run)
    assert {"unit-conflict", "theorem-coefficient", "moment-constant"} <= _kinds(report)
    assert all(d.documented for d in report.deviations)
    theorem = [d for d in report.deviations if d.kind == "theorem-coefficient"]
    assert [d.subject for d in theorem] == ["K2"]
    assert "225/32" in theorem[0].detail and "225/64" in theorem[0].detail


def test_theorem_records(published_run: PipelineRun) -> None:
    theorems = {t.source: t for t in build_report(published_run).theorems}
    assert set(theorems) == {"engine", "published", "published theorem"}
    assert theorems["published"].K2 == (225, 32)
    assert theorems["published theorem"].K2 == (225, 64)
    assert theorems["published"].status == "mismatch"


def test_exit_code(published_run: PipelineRun) -> None:
    report = build_report(published_run)
    assert exit_code(report) == 2
    assert exit_code(report.model_copy(update={"deviations": []})) == 0
    open_deviation = Deviation(kind="case-value", subject="case 4", detail="-", documented=False)
    assert exit_code(report.model_copy(update={"deviations": report.deviations + [open_deviation]})) == 1


def test_nonvanishing_extra_integral_is_not_documented(published_run: PipelineRun) -> None:
    published_run.pairs = [AdjointPair(case=6, partner=2, sign=1, extra=SB, difference=SB)]
    report = build_report(published_run)
    adjoint = [d for d in report.deviations if d.kind == "adjoint-pair"]
    assert [d.subject for d in adjoint] == ["cases 6 and 2"]
    assert not adjoint[0].documented
    assert exit_code(report) == 1


def test_latex_report(published_run: PipelineRun) -> None:
    latex = emit_latex(build_report(published_run)).decode("utf-8")
    assert latex.startswith(r"\documentclass")
    assert latex.rstrip().endswith(r"\end{document}")
    assert r"\frac{225}{64}" in latex
    assert r"\frac{29}{4}" in latex
    assert r"\frac{197}{12}" in latex
    assert r"$[\pi^{3}]$" in latex
    assert "(((" not in latex


def test_text_report(published_run: PipelineRun) -> None:
    text = emit_text(build_report(published_run)).decode("utf-8")
    assert "Cases" in text
    assert "Deviations" in text
    assert "[pi^3]" in text
    assert "[pi*Omega3]" in text
    assert "Theorem [pi^3/16]" in text
    assert "\x1b[" not in text


def test_tex_escape() -> None:
    assert tex_escape("sigma_1 ^ 2 & {x}") == r"sigma\_1 \^{} 2 \& \{x\}"
    assert tex_escape("a\\b") == r"a\textbackslash{}b"


def test_emit_intermediate() -> None:
    item = Intermediate(
        schema_tag="kkw5/1",
        target="relations",
        entries=[ShownEntry(label="sM", text="3*h1^2 - 4*h2 + sB", latex="3 h'(0)^{2}")],
    )
    payload = orjson.loads(emit_intermediate(item, "json"))
    assert payload == {
        "schema": "kkw5/1",
        "target": "relations",
        "entries": [{"label": "sM", "text": "3*h1^2 - 4*h2 + sB", "latex": "3 h'(0)^{2}"}],
    }
    assert b"3 h'(0)^{2}" in emit_intermediate(item, "latex")
    assert b"3*h1^2 - 4*h2 + sB" in emit_intermediate(item, "text")


def test_write_report(tmp_path: Path) -> None:
    path = tmp_path / "report.json"
    assert write_report(b"{}\n", str(path))
    assert path.read_bytes() == b"{}\n"
    assert not write_report(b"{}", str(tmp_path / "missing" / "report.json"))


def test_intermediate_text_keeps_bracketed_units() -> None:
    item = Intermediate(
        schema_tag="kkw5/1",
        target="moments",
        entries=[ShownEntry(label="gamma degree2 [pi^2]", text="1/2", latex=r"\frac{1}{2}")],
    )
    assert b"gamma degree2 [pi^2]" in emit_intermediate(item, "text")
