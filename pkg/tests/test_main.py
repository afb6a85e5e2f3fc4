import orjson
import pytest
from click.testing import CliRunner

from boundary_residue.errors import PipelineInvariantError
from boundary_residue.intermediates import SHOW_TARGETS, IntermediateBuilder
from boundary_residue.pipeline import ResiduePipeline
from main import USAGE_EXIT_CODE, cli, run_cli


def _builder() -> IntermediateBuilder:
    return IntermediateBuilder(ResiduePipeline())


def test_show_targets() -> None:
    assert {"q-1", "q-2", "q-3", "case-1", "case-15", "pi-plus-table", "expr"} <= set(SHOW_TARGETS)


def test_unknown_target_is_an_error() -> None:
    with pytest.raises(PipelineInvariantError):
        _builder().build("case-16")


def test_expr_needs_text() -> None:
    with pytest.raises(PipelineInvariantError):
        _builder().build("expr")


def test_moments_intermediate() -> None:
    item = _builder().build("moments")
    texts = {e.label: e.text for e in item.entries}
    assert texts["gamma degree2 [pi^2]"] == "1/2"
    assert texts["shorthand degree4 [pi^2]"] == "1/24"


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "--format", "yaml"],
        ["show", "case-16"],
        ["show", "expr"],
        ["verify", "--jobs", "0"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_64(argv, capsys) -> None:
    assert run_cli(argv) == USAGE_EXIT_CODE
    assert "Error" in capsys.readouterr().err


def test_show_relations_as_json() -> None:
    result = CliRunner(mix_stderr=False).invoke(cli, ["show", "relations", "--format", "json"])
    assert result.exit_code == 0
    payload = orjson.loads(result.stdout_bytes)
    assert payload["target"] == "relations"
    assert payload["entries"][0]["text"] == "3*h1^2 - 4*h2 + sB"


def test_show_expression(capsysbinary) -> None:
    assert run_cli(["show", "expr", "--eval", "h1*h2 + h2*h1", "--format", "json"]) == 0
    payload = orjson.loads(capsysbinary.readouterr().out)
    assert [(e["label"], e["text"]) for e in payload["entries"]] == [("expression", "2*h1*h2")]


def test_show_expression_that_does_not_parse() -> None:
    assert run_cli(["show", "expr", "--eval", "h1 +* h2"]) == 1


def test_show_writes_output_file(tmp_path) -> None:
    path = tmp_path / "moments.tex"
    assert run_cli(["show", "moments", "--format", "latex", "-o", str(path)]) == 0
    assert path.read_text().startswith(r"\documentclass")


@pytest.mark.slow
def test_compute_json_is_deterministic(capsysbinary) -> None:
    assert run_cli(["compute", "--format", "json"]) == 0
    first = capsysbinary.readouterr().out
    assert run_cli(["compute", "--format", "json"]) == 0
    assert capsysbinary.readouterr().out == first


@pytest.mark.slow
def test_verify_with_oracle(capsysbinary) -> None:
    assert run_cli(["verify", "--format", "json", "--seed", "7"]) in (0, 2)
    payload = orjson.loads(capsysbinary.readouterr().out)
    assert len(payload["cases"]) == 15
