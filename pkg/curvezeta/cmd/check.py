#!/usr/bin/env python3
# pylint: disable=no-value-for-parameter
# pylint: disable=too-many-arguments
# pylint: disable=too-many-locals
import click

from curvezeta.putils import exit_on_error, make_sync
from curvezeta.render import report_doc
from curvezeta.zeta import ReportOptions, run_report

from .common import emit, input_options, load, setup

CHECK_FAILED = 2


@click.command()
@input_options
@click.option("--functional-equation", is_flag=True, default=False, help="Z(UT) against Z(1/T)")
@click.option("--kiyek", is_flag=True, default=False, help="step(n,i) + step(c-n-e_i,i) = 1")
@click.option("--eles", is_flag=True, default=False, help="l(c-n) - l(n) = delta - |n|")
@click.option("--symmetry", is_flag=True, default=False, help="a_i = a_(c-i) U^(delta-|i|)")
@click.option("--oracle-degree", default=None, type=click.IntRange(min=0), help="Compare with the summed series")
@click.option("--finite-field", "-p", "primes", multiple=True, type=int, help="Count ideals over F_p (repeatable)")
@click.option("--ring-checks/--no-ring-checks", default=True, help="l-table agreement and truncation stability")
@exit_on_error
@make_sync
@click.pass_context
async def check(
    ctx: click.Context,
    input_path: str,
    fmt: str | None,
    config_path: str | None,
    log_level: str | None,
    truncation: tuple[int, ...] | None,
    functional_equation: bool,
    kiyek: bool,
    eles: bool,
    symmetry: bool,
    oracle_degree: int | None,
    primes: tuple[int, ...],
    ring_checks: bool,
) -> None:
    """
    Run the structural checks plus the selected theorem checks; without a selection all of
    them run. Exits 2 when a check fails (expected failures do not count).
    """
    conf = setup(config_path, log_level)
    loaded = load(conf, input_path, truncation, field_model=bool(primes))
    selected = functional_equation or kiyek or eles or symmetry or oracle_degree is not None
    options = ReportOptions(
        functional_equation=functional_equation or not selected,
        symmetry=symmetry or not selected,
        kiyek=kiyek or not selected,
        eles=eles or not selected,
        oracle=oracle_degree is not None or not selected,
        oracle_degree=oracle_degree,
        oracle_extra_degree=conf.zeta.oracle_extra_degree,
        primes=sorted(set(primes)),
        ring_checks=ring_checks,
        finite_field_budget=conf.zeta.finite_field_budget,
        concurrent=conf.zeta.concurrent_checks,
        expect_gorenstein=loaded.description.expect_gorenstein,
        plane_origin=loaded.description.plane_origin,
    )
    report = await run_report(
        loaded.semigroup, options, source=loaded.source, model=loaded.model, field_model=loaded.field_model
    )
    emit(report_doc(report), conf, fmt)
    ctx.exit(CHECK_FAILED if report.failed else 0)
