import logging
import sys
from dataclasses import replace
from typing import List, Optional

import click

from boundary_residue.config import (
    DEFAULT_CONFIG,
    DEFAULT_ORACLE_CONFIG,
    DEFAULT_REPORT_CONFIG,
)
from boundary_residue.intermediates import SHOW_TARGETS, IntermediateBuilder
from boundary_residue.oracle import NumericOracle
from boundary_residue.pipeline import ResiduePipeline
from boundary_residue.report import (
    build_report,
    emit,
    emit_intermediate,
    exit_code,
    write_report,
)

logger = logging.getLogger(__name__)

USAGE_EXIT_CODE = 64
FORMATS = ("text", "json", "latex")


def setup_logging(verbose: bool):
    """Log to stderr so report bytes on stdout stay deterministic."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run_options(oracle_default: str):
    """Flags shared by every subcommand."""
    options = [
        click.option("--format", "fmt", type=click.Choice(FORMATS), default="text", help="Report format"),
        click.option(
            "--oracle",
            type=click.Choice(["on", "off"]),
            default=oracle_default,
            help="Arbitrate mismatches with the numeric oracle",
        ),
        click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=DEFAULT_ORACLE_CONFIG.seed,
                     help="Seed for the oracle's random parameter samples"),
        click.option("--jobs", type=click.IntRange(1), default=DEFAULT_CONFIG.jobs,
                     help="Worker processes for case evaluation"),
        click.option("--verbose", is_flag=True, help="Log at DEBUG level"),
        click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
                     help="Write the report to a file instead of stdout"),
    ]

    def decorator(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn

    return decorator


def make_pipeline(jobs: int) -> ResiduePipeline:
    return ResiduePipeline(replace(DEFAULT_CONFIG, jobs=jobs))


def make_oracle(oracle: str, seed: int) -> Optional[NumericOracle]:
    if oracle == "off":
        return None
    return NumericOracle(replace(DEFAULT_ORACLE_CONFIG, seed=seed))


def deliver(data: bytes, output: Optional[str]) -> bool:
    if output:
        return write_report(data, output)
    stdout = click.get_binary_stream("stdout")
    stdout.write(data)
    stdout.flush()
    return True


def run_report(fmt: str, oracle: str, seed: int, jobs: int, output: Optional[str]):
    pipeline = make_pipeline(jobs)
    run = pipeline.run(make_oracle(oracle, seed))
    report = build_report(run, DEFAULT_REPORT_CONFIG)
    delivered = deliver(emit(report, fmt, DEFAULT_REPORT_CONFIG), output)
    return report, delivered


@click.group()
def cli():
    """Exact boundary residue of (pi+ D^-1)^2 on five-dimensional spin manifolds."""


@cli.command()
@run_options(oracle_default="off")
def compute(fmt: str, oracle: str, seed: int, jobs: int, verbose: bool, output: Optional[str]) -> int:
    """Run the full pipeline and emit the report."""
    setup_logging(verbose)
    _, delivered = run_report(fmt, oracle, seed, jobs, output)
    return 0 if delivered else 1


@cli.command()
@run_options(oracle_default="on")
def verify(fmt: str, oracle: str, seed: int, jobs: int, verbose: bool, output: Optional[str]) -> int:
    """Run the pipeline, reconcile every fixture and exit 0, 2 or 1."""
    setup_logging(verbose)
    report, delivered = run_report(fmt, oracle, seed, jobs, output)
    code = exit_code(report)
    logger.info(f"Verification exit code {code}")
    return code if delivered else 1


@cli.command()
@click.argument("target", type=click.Choice(SHOW_TARGETS))
@click.option("--eval", "expression", default=None, help="Expression text for the expr target")
@run_options(oracle_default="off")
def show(
    target: str,
    expression: Optional[str],
    fmt: str,
    oracle: str,
    seed: int,
    jobs: int,
    verbose: bool,
    output: Optional[str],
) -> int:
    """Print one named intermediate."""
    if target == "expr" and not expression:
        raise click.UsageError("show expr needs --eval TEXT")
    setup_logging(verbose)
    builder = IntermediateBuilder(make_pipeline(jobs), make_oracle(oracle, seed), DEFAULT_REPORT_CONFIG)
    item = builder.build(target, expression)
    return 0 if deliver(emit_intermediate(item, fmt, DEFAULT_REPORT_CONFIG), output) else 1


def run_cli(argv: Optional[List[str]] = None) -> int:
    """
    Runs the command line and maps every outcome to an exit code.

    Returns:
        int: 0, 1 or 2 from the command, 64 for usage errors.
    """
    try:
        code = cli.main(args=argv, prog_name="boundary-residue", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return USAGE_EXIT_CODE
    except click.Abort:
        return 1
    except Exception as e:
        logger.exception(f"Run failed: {e}")
        return 1
    return code if isinstance(code, int) else 0


if __name__ == "__main__":
    sys.exit(run_cli())
