#!/usr/bin/env python3
# pylint: disable=no-value-for-parameter
# pylint: disable=too-many-arguments
import click

from curvezeta.exceptions import InputError
from curvezeta.parse_utils import parse_u_value
from curvezeta.putils import exit_on_error
from curvezeta.render import OutputDocument, rational_doc, zetaform_doc
from curvezeta.zeta import cartier_local_factor, poincare_series, single_variable, specialize_U, universal_zeta

from .common import emit, input_options, load, setup


@click.command()
@input_options
@click.option("--single", is_flag=True, default=False, help="Substitute T_i -> T")
@exit_on_error
@click.pass_context
def zeta(
    ctx: click.Context,
    input_path: str,
    fmt: str | None,
    config_path: str | None,
    log_level: str | None,
    truncation: tuple[int, ...] | None,
    single: bool,
) -> None:
    conf = setup(config_path, log_level)
    loaded = load(conf, input_path, truncation)
    z = universal_zeta(loaded.semigroup)
    if single:
        z = single_variable(z)
    emit(OutputDocument(command="zeta", source=loaded.source, zeta=zetaform_doc(z)), conf, fmt)
    ctx.exit()


@click.command()
@input_options
@click.option("--single", is_flag=True, default=False, help="Substitute T_i -> T")
@exit_on_error
@click.pass_context
def poincare(
    ctx: click.Context,
    input_path: str,
    fmt: str | None,
    config_path: str | None,
    log_level: str | None,
    truncation: tuple[int, ...] | None,
    single: bool,
) -> None:
    conf = setup(config_path, log_level)
    loaded = load(conf, input_path, truncation)
    z = universal_zeta(loaded.semigroup)
    if single:
        z = single_variable(z)
    series = poincare_series(z, loaded.semigroup.delta)
    emit(OutputDocument(command="poincare", source=loaded.source, poincare=zetaform_doc(series)), conf, fmt)
    ctx.exit()


@click.command()
@input_options
@click.option("--u", "u_value", required=True, help='Value of U: "1", a rational, "q" (symbolic) or "q=<rational>"')
@click.option("--single", is_flag=True, default=False, help="Substitute T_i -> T")
@click.option("--cartier", is_flag=True, default=False, help="Cartier local factor (undo the q^-1 T twist)")
@exit_on_error
@click.pass_context
def specialize(
    ctx: click.Context,
    input_path: str,
    fmt: str | None,
    config_path: str | None,
    log_level: str | None,
    truncation: tuple[int, ...] | None,
    u_value: str,
    single: bool,
    cartier: bool,
) -> None:
    conf = setup(config_path, log_level)
    try:
        at = parse_u_value(u_value)
    except ValueError as e:
        raise InputError(f"--u: {e}") from e
    if cartier and not u_value.replace(" ", "").startswith("q"):
        raise InputError("--cartier needs --u q or --u q=<rational>")
    loaded = load(conf, input_path, truncation)
    z = universal_zeta(loaded.semigroup)
    if cartier:
        result = cartier_local_factor(z, at)
    else:
        result = specialize_U(single_variable(z) if single else z, at)
    emit(OutputDocument(command="specialize", source=loaded.source, specialization=rational_doc(result)), conf, fmt)
    ctx.exit()
