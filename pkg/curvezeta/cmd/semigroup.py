#!/usr/bin/env python3
# pylint: disable=no-value-for-parameter
import click

from curvezeta.putils import exit_on_error
from curvezeta.render import OutputDocument, semigroup_doc

from .common import emit, input_options, load, setup


@click.command()
@input_options
@exit_on_error
@click.pass_context
def semigroup(
    ctx: click.Context,
    input_path: str,
    fmt: str | None,
    config_path: str | None,
    log_level: str | None,
    truncation: tuple[int, ...] | None,
) -> None:
    """Conductor, delta, Gorenstein flag and S inside [0, c+1]."""
    conf = setup(config_path, log_level)
    loaded = load(conf, input_path, truncation)
    doc = OutputDocument(
        command="semigroup",
        source=loaded.source,
        truncation=list(loaded.model.truncation) if loaded.model is not None else None,
        semigroup=semigroup_doc(loaded.semigroup),
    )
    emit(doc, conf, fmt)
    ctx.exit()
