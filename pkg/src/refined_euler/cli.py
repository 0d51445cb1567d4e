#!/usr/bin/env python3

import sys
from pathlib import Path
from typing import NoReturn, Optional, Tuple

import click
import structlog
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from refined_euler.checks import Bounds, SuiteRunner, resolve
from refined_euler.checks.suites import SUITES
from refined_euler.errors import ContractViolation, RefinedEulerError
from refined_euler.instances import load_instance, load_trivialization
from refined_euler.ladic import chi_l
from refined_euler.npc import chi, validate
from refined_euler.report import build_report, dump_report, report_is_consistent
from refined_euler.torsion import chi_rel_npc
from refined_euler.utils.config import get_settings
from refined_euler.utils.logging import setup_logging

console = Console()
logger = structlog.get_logger()

EXIT_INVALID = 1
EXIT_CONTRACT = 2


def _exit_code(error: Exception) -> int:
    return EXIT_CONTRACT if isinstance(error, ContractViolation) else EXIT_INVALID


def _fail(action: str, error: RefinedEulerError) -> NoReturn:
    console.print(f"[red]✗ {action} failed: {escape(str(error))}[/red]")
    sys.exit(_exit_code(error))


def _parse_primes(ctx, param, value: Optional[str]) -> Tuple[int, ...]:
    if value is None:
        return tuple(get_settings().default_primes)
    try:
        return tuple(int(p) for p in value.split(",") if p.strip())
    except ValueError:
        raise click.BadParameter("expected a comma separated list of primes, e.g. 2,3,5,7")


@click.group()
@click.option("--log-level", default=None, help="Log level (DEBUG, INFO, WARNING, ERROR)")
def cli(log_level):
    """Euler characteristics and refined Euler characteristics of nearly perfect complexes"""
    setup_logging(log_level or get_settings().log_level)


@cli.command(name="validate")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def validate_command(file: Path):
    """Check every invariant of a nearly perfect complex."""
    try:
        npc = load_instance(file)
    except RefinedEulerError as e:
        _fail("Parsing", e)
    report = validate(npc)
    if report.valid:
        console.print("[green]✓ valid[/green]")
        return
    console.print("[red]✗ invalid[/red]")
    for issue in report.summary():
        console.print(f"  {escape(issue)}")
    sys.exit(EXIT_INVALID)


@cli.command(name="chi")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def chi_command(file: Path):
    """Euler characteristic of a nearly perfect complex."""
    try:
        console.print(chi(load_instance(file)))
    except RefinedEulerError as e:
        _fail("Euler characteristic", e)


@cli.command(name="chi-l")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--primes", callback=_parse_primes, help="Comma separated primes (default: NPC_DEFAULT_PRIMES)")
def chi_l_command(file: Path, primes: Tuple[int, ...]):
    """l-adic Euler characteristics, one line per prime."""
    try:
        npc = load_instance(file)
        for l in primes:
            console.print(f"{l}: {chi_l(npc, l)}")
    except RefinedEulerError as e:
        _fail("l-adic Euler characteristic", e)


@cli.command(name="chi-rel")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option(
    "--lambda",
    "lambda_file",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Trivialization file",
)
def chi_rel_command(file: Path, lambda_file: Path):
    """Refined Euler characteristic as num/den.

    Alternates listed in the trivialization file are computed as well and
    must give the same class.
    """
    try:
        npc = load_instance(file)
        lam, alternates = load_trivialization(lambda_file)
        value = chi_rel_npc(npc, lam)
        for k, other in enumerate(alternates):
            changed = chi_rel_npc(npc, lam, alternate=other)
            if changed != value:
                raise ContractViolation(
                    "class depends on the alternate trivialization", alternate=k, value=str(value), other=str(changed)
                )
        console.print(str(value))
    except RefinedEulerError as e:
        _fail("Refined Euler characteristic", e)


@cli.command(name="check")
@click.option(
    "--suite",
    type=click.Choice(sorted(SUITES) + ["all"]),
    default="all",
    show_default=True,
    help="Property suite to run",
)
@click.option("--property", "properties", multiple=True, help="Run only this property of the suite (repeatable)")
@click.option("--seed", type=int, default=None, help="Random seed (default: NPC_SEED)")
@click.option("--cases", type=click.IntRange(min=1), default=None, help="Cases per property (default: NPC_CASES)")
@click.option("--entry", type=click.IntRange(1, 50), default=None, help="Largest absolute matrix entry")
@click.option("--matrix", type=click.IntRange(1, 8), default=None, help="Largest matrix side")
@click.option("--rank", type=click.IntRange(1, 8), default=None, help="Largest free rank")
@click.option("--torsion", type=click.IntRange(2, 1000), default=None, help="Largest torsion order")
@click.option("--progress/--no-progress", default=True, help="Show a progress bar")
def check_command(
    suite: str,
    properties: Tuple[str, ...],
    seed: Optional[int],
    cases: Optional[int],
    entry: Optional[int],
    matrix: Optional[int],
    rank: Optional[int],
    torsion: Optional[int],
    progress: bool,
):
    """Run randomized property suites.

    Every property of a suite gets --cases cases. The size options raise or
    lower the defaults of the generated instances.
    """
    settings = get_settings()
    seed = settings.seed if seed is None else seed
    cases = settings.cases if cases is None else cases
    sizes = {"entry": entry, "matrix": matrix, "rank": rank, "torsion": torsion}
    bounds = Bounds(**{k: v for k, v in sizes.items() if v is not None})
    if properties and suite == "all":
        raise click.UsageError("--property needs a single --suite")
    runner = SuiteRunner(seed, cases, progress=progress)
    try:
        results = [runner.run(s, properties) for s in resolve(suite, bounds)]
    except KeyError as e:
        raise click.BadParameter(str(e.args[0]), param_hint="--property")

    table = Table(title=f"Property suites (seed {seed}, {cases} cases per property)")
    table.add_column("Suite")
    table.add_column("Passed", justify="right")
    table.add_column("Failed", justify="right")
    for result in results:
        table.add_row(result.name, f"{result.passed}/{result.total}", str(result.failed))
    console.print(table)

    failures = [f for r in results for f in r.failures]
    for failure in failures:
        console.print(f"[red]✗ {escape(failure)}[/red]")
    if failures:
        sys.exit(EXIT_CONTRACT)
    console.print(f"[green]✓ {sum(r.passed for r in results)}/{sum(r.total for r in results)} pass[/green]")


@cli.command(name="report")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False, path_type=Path), help="Report file")
@click.option(
    "--lambda",
    "lambda_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Trivialization file; adds the refined class",
)
@click.option("--primes", callback=_parse_primes, help="Comma separated primes (default: NPC_DEFAULT_PRIMES)")
@click.option("--timing", is_flag=True, help="Include timings (the report is then no longer reproducible)")
def report_command(
    file: Path, output: Path, lambda_file: Optional[Path], primes: Tuple[int, ...], timing: bool
):
    """Write a YAML report of every invariant."""
    try:
        npc = load_instance(file)
        lam, alternates = load_trivialization(lambda_file) if lambda_file else (None, [])
        report = build_report(npc, primes, lam, alternates, timing=timing)
    except RefinedEulerError as e:
        _fail("Report", e)
    output.write_text(dump_report(report))
    logger.info("Wrote report", path=str(output))
    if not report["validation"]["valid"]:
        console.print(f"[red]✗ Instance is invalid; report written to {output}[/red]")
        sys.exit(EXIT_INVALID)
    if not report_is_consistent(report):
        console.print(f"[red]✗ Cross-checks disagree; report written to {output}[/red]")
        sys.exit(EXIT_CONTRACT)
    console.print(f"[green]✓ Report written to {output}[/green]")


if __name__ == "__main__":
    cli()
